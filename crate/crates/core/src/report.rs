//! Row-oriented report types and CSV emitters. Values are reported against
//! original node labels; influence values are clamped to [0, 1] for output
//! only (internal checks always see raw solver values).

use std::io::{self, Write};

use serde::Serialize;

use crate::graph::Graph;
use crate::influence::{BoundTable, InfluenceVector};
use crate::simulate::SpreadEstimate;

#[derive(Debug, Clone, Serialize)]
pub struct NodeValue {
    pub node: u64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub node: u64,
    pub upper_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_influence: Option<f64>,
}

/// Influence vector as labeled rows, clamped for reporting.
pub fn influence_rows(g: &Graph, vector: &InfluenceVector) -> Vec<NodeValue> {
    vector
        .clamped()
        .into_iter()
        .enumerate()
        .map(|(j, value)| NodeValue {
            node: g.label(j),
            value,
        })
        .collect()
}

pub fn bound_rows(g: &Graph, table: &BoundTable) -> Vec<BoundRow> {
    (0..g.n())
        .map(|i| BoundRow {
            node: g.label(i),
            upper_bound: table.upper[i],
            total_influence: table.exact[i],
        })
        .collect()
}

pub fn write_influence_csv<W: Write>(mut w: W, rows: &[NodeValue]) -> io::Result<()> {
    writeln!(w, "node,value")?;
    for row in rows {
        writeln!(w, "{},{}", row.node, row.value)?;
    }
    Ok(())
}

/// Matrix CSV: one row per (source, node) pair.
pub fn write_matrix_csv<W: Write>(mut w: W, g: &Graph, rows: &[InfluenceVector]) -> io::Result<()> {
    writeln!(w, "source,node,value")?;
    for vector in rows {
        let source = g.label(vector.source);
        for (j, value) in vector.clamped().into_iter().enumerate() {
            writeln!(w, "{},{},{}", source, g.label(j), value)?;
        }
    }
    Ok(())
}

pub fn write_bounds_csv<W: Write>(mut w: W, rows: &[BoundRow]) -> io::Result<()> {
    writeln!(w, "node,upper_bound,total_influence")?;
    for row in rows {
        match row.total_influence {
            Some(exact) => writeln!(w, "{},{},{}", row.node, row.upper_bound, exact)?,
            None => writeln!(w, "{},{},", row.node, row.upper_bound)?,
        }
    }
    Ok(())
}

/// Per-run cascade counts for distribution plots.
pub fn write_runs_csv<W: Write>(mut w: W, estimate: &SpreadEstimate) -> io::Result<()> {
    writeln!(w, "run,activated")?;
    for (r, count) in estimate.counts.iter().enumerate() {
        writeln!(w, "{r},{count}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn influence_rows_clamp_and_relabel() {
        let g = Graph::from_arcs(&[(5, 9, 1.0), (9, 5, 1.0)], false).unwrap();
        let vector = InfluenceVector {
            source: 0,
            values: vec![1.0 + 5e-9, -3e-13],
            source_diag: 1.0,
        };
        let rows = influence_rows(&g, &vector);
        assert_eq!(rows[0].node, 5);
        assert_eq!(rows[0].value, 1.0);
        assert_eq!(rows[1].node, 9);
        assert_eq!(rows[1].value, 0.0);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let g = Graph::from_arcs(&[(1, 2, 1.0)], false).unwrap();
        let rows = vec![
            NodeValue { node: 1, value: 1.0 },
            NodeValue { node: 2, value: 0.5 },
        ];
        let mut buf = Vec::new();
        write_influence_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "node,value\n1,1\n2,0.5\n");
        let _ = g;
    }
}

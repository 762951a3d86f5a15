//! Edge-list ingestion.
//!
//! One edge per line as two whitespace-separated nonnegative integer ids,
//! `#` comments, and an optional `basepoint <id>` header. The graph is its
//! own window: the radius is the eccentricity of the basepoint and the
//! frontier is the set of vertices at that distance.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::AmbientWindow;

#[derive(Debug)]
pub struct LoadedGraph {
    pub window: AmbientWindow,
    pub warnings: Vec<String>,
}

pub fn load_edge_list(path: impl AsRef<Path>, degree_bound: Option<usize>) -> Result<AmbientWindow> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let loaded = parse_edge_list(&path.display().to_string(), &text, degree_bound)?;
    for w in &loaded.warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(loaded.window)
}

pub fn parse_edge_list(label: &str, text: &str, degree_bound: Option<usize>) -> Result<LoadedGraph> {
    let mut basepoint: Option<(u64, usize)> = None;
    let mut edges: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut ids: BTreeSet<u64> = BTreeSet::new();
    let mut warnings = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let parse_id = |t: &str| -> Result<u64> {
            t.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("`{t}` is not a nonnegative integer vertex id"),
            })
        };
        if tokens[0] == "basepoint" {
            if tokens.len() != 2 {
                return Err(Error::Parse { line: line_no, message: "expected `basepoint <id>`".into() });
            }
            if basepoint.is_some() {
                return Err(Error::Parse { line: line_no, message: "basepoint given twice".into() });
            }
            basepoint = Some((parse_id(tokens[1])?, line_no));
            continue;
        }
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two vertex ids, found {} tokens", tokens.len()),
            });
        }
        let (u, v) = (parse_id(tokens[0])?, parse_id(tokens[1])?);
        if u == v {
            return Err(Error::Parse { line: line_no, message: format!("self-loop at vertex {u}") });
        }
        if !edges.insert((u.min(v), u.max(v))) {
            warnings.push(format!("line {line_no}: duplicate edge {u}-{v} ignored"));
        }
        ids.insert(u);
        ids.insert(v);
    }

    if ids.is_empty() {
        return Err(Error::Parse { line: 0, message: "no edges".into() });
    }
    let dense: BTreeMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut adjacency = vec![Vec::new(); ids.len()];
    for &(u, v) in &edges {
        let (a, b) = (dense[&u], dense[&v]);
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let observed = adjacency.iter().map(Vec::len).max().unwrap_or(0);
    if let Some(bound) = degree_bound {
        if observed > bound {
            return Err(Error::InvalidGraph(format!("degree {observed} exceeds the configured bound {bound}")));
        }
    }
    let origin = match basepoint {
        Some((id, line)) => {
            *dense.get(&id).ok_or(Error::Parse { line, message: format!("basepoint {id} is not a vertex") })?
        }
        None => 0,
    };
    let window = AmbientWindow::new(
        label,
        adjacency,
        origin,
        degree_bound.unwrap_or(observed),
        Some(ids.into_iter().collect()),
    )?;
    Ok(LoadedGraph { window, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_line_file_is_a_path() {
        let g = parse_edge_list("t", "0 1\n1 2\n", None).unwrap();
        assert_eq!(g.window.len(), 3);
        assert_eq!(g.window.edge_count(), 2);
        assert_eq!(g.window.radius(), 2);
        assert!(g.warnings.is_empty());
    }

    #[test]
    fn duplicates_are_dropped_with_a_warning() {
        let g = parse_edge_list("t", "# header\n0 1\n1 0\n1 2\n", None).unwrap();
        assert_eq!(g.window.edge_count(), 2);
        assert_eq!(g.warnings.len(), 1);
        assert!(g.warnings[0].starts_with("line 3"));
    }

    #[test]
    fn self_loops_and_garbage_are_rejected_with_line_numbers() {
        assert!(matches!(parse_edge_list("t", "0 1\n2 2\n", None), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("t", "0 1\n1 x\n", None), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn basepoint_header_sets_origin() {
        let g = parse_edge_list("t", "basepoint 7\n5 6\n6 7\n", None).unwrap();
        assert_eq!(g.window.external_id(g.window.origin()), 7);
        assert_eq!(g.window.frontier().iter().map(|&v| g.window.external_id(v)).collect::<Vec<_>>(), [5]);
        assert!(parse_edge_list("t", "0 1\n1 2\n", Some(1)).is_err());
    }
}

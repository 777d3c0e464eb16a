//! Line-based on-disk graph store.
//!
//! ```text
//! manifest.txt        one model id per line, in dataset order
//! <model_id>.lpg      g <model_id>
//!                     v <id> <label>|<label>... {<key>=<value>,...}
//!                     e <id_a> <id_b> <edge label>
//! ```
//!
//! Labels, ids, keys and values are percent-encoded so that separators never
//! appear inside a field. Nodes are written by id, edges by
//! `(min endpoint, max endpoint, label)`.

use std::fs;
use std::path::{Path, PathBuf};

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, GraphDataset, ModelGraph, NodeId};

pub const MANIFEST: &str = "manifest.txt";
pub const GRAPH_EXT: &str = "lpg";

const FIELD: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'_')
    .remove(b'.')
    .remove(b'~')
    .remove(b'*');

pub(crate) fn encode(s: &str) -> String {
    utf8_percent_encode(s, FIELD).to_string()
}

pub(crate) fn decode(s: &str) -> std::result::Result<String, String> {
    percent_decode_str(s)
        .decode_utf8()
        .map(|c| c.into_owned())
        .map_err(|e| format!("invalid percent-encoding in {s:?}: {e}"))
}

/// Serializes one graph in the store's text format.
pub fn graph_to_string(g: &ModelGraph) -> String {
    let mut out = format!("g {}\n", encode(&g.model_id));
    for n in g.nodes() {
        let labels: Vec<String> = n.construct_labels.iter().map(|l| encode(l.as_str())).collect();
        out.push_str(&format!("v {} {}", n.id, labels.join("|")));
        if !n.properties.is_empty() {
            let props: Vec<String> = n
                .properties
                .iter()
                .map(|(k, v)| format!("{}={}", encode(k), encode(v)))
                .collect();
            out.push_str(&format!(" {{{}}}", props.join(",")));
        }
        out.push('\n');
    }
    for e in g.edges() {
        out.push_str(&format!("e {} {} {}\n", e.a, e.b, e.label));
    }
    out
}

/// Parses a graph written by [`graph_to_string`]. `path` is only used in
/// error messages.
pub fn graph_from_str(text: &str, path: &Path) -> Result<ModelGraph> {
    let mut graph: Option<ModelGraph> = None;
    let mut edge_records = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::parse(path, line_no, m);
        let mut parts = line.splitn(2, ' ');
        let tag = parts.next().unwrap_or("");
        let rest = parts.next().unwrap_or("");
        match tag {
            "g" => {
                if graph.is_some() {
                    return Err(err("duplicate graph header".into()));
                }
                let id = decode(rest.trim()).map_err(err)?;
                if id.is_empty() {
                    return Err(err("empty model id".into()));
                }
                graph = Some(ModelGraph::new(id));
            }
            "v" => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| err("node record before graph header".into()))?;
                let mut fields = rest.splitn(3, ' ');
                let id: u32 = fields
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("malformed node id".into()))?;
                if id as usize != g.node_count() {
                    return Err(err(format!(
                        "node id {id} out of order (expected {})",
                        g.node_count()
                    )));
                }
                let labels = fields
                    .next()
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| err("node record without labels".into()))?
                    .split('|')
                    .map(decode)
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(err)?;
                let node = g.add_node(labels).map_err(|e| err(e.to_string()))?;
                if let Some(block) = fields.next() {
                    let inner = block
                        .strip_prefix('{')
                        .and_then(|s| s.strip_suffix('}'))
                        .ok_or_else(|| err("malformed property block".into()))?;
                    for pair in inner.split(',').filter(|p| !p.is_empty()) {
                        let (k, v) = pair
                            .split_once('=')
                            .ok_or_else(|| err(format!("malformed property {pair:?}")))?;
                        g.set_property(node, &decode(k).map_err(err)?, decode(v).map_err(err)?);
                    }
                }
            }
            "e" => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| err("edge record before graph header".into()))?;
                let fields: Vec<&str> = rest.split(' ').collect();
                if fields.len() != 3 {
                    return Err(err(format!("edge record {edge_records}: expected 3 fields")));
                }
                let a: u32 = fields[0]
                    .parse()
                    .map_err(|_| err(format!("edge record {edge_records}: bad endpoint")))?;
                let b: u32 = fields[1]
                    .parse()
                    .map_err(|_| err(format!("edge record {edge_records}: bad endpoint")))?;
                let label: EdgeLabel = fields[2]
                    .parse()
                    .map_err(|e: Error| err(format!("edge record {edge_records}: {e}")))?;
                let n = g.node_count() as u32;
                if a >= n || b >= n {
                    return Err(err(format!(
                        "edge record {edge_records}: endpoint {} >= node count {n}",
                        a.max(b)
                    )));
                }
                if !g
                    .add_edge(NodeId(a), NodeId(b), label)
                    .map_err(|e| err(format!("edge record {edge_records}: {e}")))?
                {
                    return Err(err(format!("edge record {edge_records}: duplicate edge")));
                }
                edge_records += 1;
            }
            other => return Err(err(format!("unknown record tag {other:?}"))),
        }
    }
    graph.ok_or_else(|| Error::parse(path, 1, "missing graph header"))
}

pub fn write_graph(g: &ModelGraph, path: &Path) -> Result<()> {
    fs::write(path, graph_to_string(g)).map_err(|e| Error::io(path, e))
}

pub fn read_graph(path: &Path) -> Result<ModelGraph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    graph_from_str(&text, path)
}

fn graph_path(dir: &Path, model_id: &str) -> PathBuf {
    dir.join(format!("{}.{GRAPH_EXT}", encode(model_id)))
}

/// Writes the manifest plus one `.lpg` file per graph. Stale `.lpg` files
/// from an earlier write are removed so the directory mirrors the dataset.
pub fn write_store(dataset: &GraphDataset, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    if let Ok(entries) = fs::read_dir(dir) {
        for entry in entries.flatten() {
            let p = entry.path();
            if p.extension().and_then(|e| e.to_str()) == Some(GRAPH_EXT) {
                fs::remove_file(&p).map_err(|e| Error::io(&p, e))?;
            }
        }
    }
    let mut manifest = String::new();
    for g in dataset.graphs() {
        manifest.push_str(&encode(&g.model_id));
        manifest.push('\n');
        write_graph(g, &graph_path(dir, &g.model_id))?;
    }
    let mpath = dir.join(MANIFEST);
    fs::write(&mpath, manifest).map_err(|e| Error::io(&mpath, e))
}

pub fn read_store(dir: &Path) -> Result<GraphDataset> {
    let mpath = dir.join(MANIFEST);
    let manifest = fs::read_to_string(&mpath).map_err(|e| Error::io(&mpath, e))?;
    let mut graphs = Vec::new();
    for (idx, line) in manifest.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let id = decode(line).map_err(|m| Error::parse(&mpath, idx + 1, m))?;
        let gpath = graph_path(dir, &id);
        if !gpath.exists() {
            return Err(Error::MissingGraphFile(gpath));
        }
        let g = read_graph(&gpath)?;
        if g.model_id != id {
            return Err(Error::parse(
                &gpath,
                1,
                format!("header id {:?} does not match manifest entry {id:?}", g.model_id),
            ));
        }
        graphs.push(g);
    }
    GraphDataset::new(graphs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ModelGraph {
        let mut g = ModelGraph::new("model 01");
        let a = g.add_node(["kind"]).unwrap();
        let b = g.add_node(["1..*", "card-src"]).unwrap();
        let c = g.add_node(["characterization"]).unwrap();
        g.set_property(a, "name", "Means of transportation, {big}=yes");
        g.add_edge(c, a, EdgeLabel::Target).unwrap();
        g.add_edge(b, c, EdgeLabel::Cardinalities).unwrap();
        g
    }

    #[test]
    fn two_node_graph_layout() {
        let mut g = ModelGraph::new("m");
        g.add_node(["kind"]).unwrap();
        g.add_node(["subkind"]).unwrap();
        assert_eq!(graph_to_string(&g), "g m\nv 0 kind\nv 1 subkind\n");
    }

    #[test]
    fn text_round_trip_with_awkward_values() {
        let g = sample();
        let text = graph_to_string(&g);
        assert!(text.contains("v 1 1..*|card-src\n"));
        assert!(text.contains("e 0 2 target\n"));
        let back = graph_from_str(&text, Path::new("x.lpg")).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn empty_store() {
        let dir = tempfile::tempdir().unwrap();
        write_store(&GraphDataset::default(), dir.path()).unwrap();
        assert_eq!(fs::read_to_string(dir.path().join(MANIFEST)).unwrap(), "");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(read_store(dir.path()).unwrap().is_empty());
    }

    #[test]
    fn missing_graph_file_is_named() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(MANIFEST), "ghost\n").unwrap();
        let err = read_store(dir.path()).unwrap_err();
        assert!(err.to_string().contains("ghost.lpg"), "{err}");
    }

    #[test]
    fn dangling_endpoint_reports_record_and_line() {
        let text = "g m\nv 0 kind\nv 1 kind\ne 0 1 source\ne 0 5 target\n";
        let err = graph_from_str(text, Path::new("m.lpg")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("m.lpg:5"), "{msg}");
        assert!(msg.contains("edge record 1"), "{msg}");
    }

    #[test]
    fn malformed_records_rejected() {
        for bad in [
            "v 0 kind\n",
            "g m\nv 1 kind\n",
            "g m\nv 0 kind {name}\n",
            "g m\nv 0 kind\nv 1 kind\ne 0 1 sideways\n",
            "g m\nx 0\n",
        ] {
            assert!(graph_from_str(bad, Path::new("b.lpg")).is_err(), "{bad:?}");
        }
    }
}

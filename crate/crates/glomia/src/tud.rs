//! Parser for the flat-file graph benchmark layout.
//!
//! A corpus directory holds line-oriented text files with 1-based ids:
//!
//! - `<name>_A.txt` — one edge per line, `i, j`, node ids global across the
//!   corpus; undirected edges appear in both directions.
//! - `<name>_graph_indicator.txt` — line k: graph id of node k.
//! - `<name>_graph_labels.txt` — line g: class label of graph g.
//! - `<name>_node_labels.txt` (optional) — line k: integer label of node k.
//! - `<name>_node_attributes.txt` (optional) — line k: comma-separated
//!   reals for node k.
//!
//! Edge labels and edge attributes are ignored. Whitespace around commas
//! and trailing blank lines are tolerated; anything else malformed is a
//! hard error. Parsing is deterministic, and a parsed [`Corpus`] is
//! immutable afterwards, so it can be shared read-only across threads.

use crate::error::{Error, Result};
use crate::tensor::Matrix;
use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One attributed, undirected, unweighted graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    /// Number of nodes (n).
    pub node_count: usize,
    /// Undirected edges as ordered pairs (a < b), 0-based, deduplicated,
    /// no self-loops, sorted.
    pub edges: Vec<(u32, u32)>,
    /// Node features, n x d.
    pub features: Matrix,
    /// 0-based contiguous class index.
    pub label: usize,
    /// Original 1-based graph id in the corpus.
    pub source_id: u32,
}

impl Graph {
    /// Undirected edge count m.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbor lists, one per node.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b as usize);
            adj[b as usize].push(a as usize);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Dense adjacency matrix (0/1), used by oracle-style tests.
    pub fn dense_adjacency(&self) -> Matrix {
        let mut a = Matrix::zeros(self.node_count, self.node_count);
        for &(i, j) in &self.edges {
            a.set(i as usize, j as usize, 1.0);
            a.set(j as usize, i as usize, 1.0);
        }
        a
    }
}

/// How node features are assembled from the corpus files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FeatureMode {
    /// Node attribute vectors verbatim.
    AttributesOnly,
    /// One-hot encoding over the corpus-wide node-label alphabet.
    OnehotNodeLabels,
    /// One-hot node labels concatenated with attributes.
    ConcatAttributesAndOnehot,
}

impl FeatureMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeatureMode::AttributesOnly => "attributes_only",
            FeatureMode::OnehotNodeLabels => "onehot_node_labels",
            FeatureMode::ConcatAttributesAndOnehot => "concat_attributes_and_onehot",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "attributes_only" => Ok(FeatureMode::AttributesOnly),
            "onehot_node_labels" => Ok(FeatureMode::OnehotNodeLabels),
            "concat_attributes_and_onehot" => Ok(FeatureMode::ConcatAttributesAndOnehot),
            other => Err(Error::Config(format!("unknown feature mode: {other}"))),
        }
    }
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A parsed collection of graphs sharing one feature space and label set.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub name: String,
    pub graphs: Vec<Graph>,
    pub class_count: usize,
    pub feature_mode: FeatureMode,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Shared feature dimension d.
    pub fn feature_dim(&self) -> usize {
        self.graphs.first().map_or(0, |g| g.features.cols())
    }

    /// Borrow the graphs at the given indices.
    pub fn select(&self, indices: &[usize]) -> Vec<&Graph> {
        indices.iter().map(|&i| &self.graphs[i]).collect()
    }
}

/// Corpus-level statistics, exact arithmetic means.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CorpusStats {
    pub graph_count: usize,
    pub class_count: usize,
    pub avg_nodes: f64,
    pub avg_edges: f64,
}

/// Average node and undirected-edge counts over the corpus.
pub fn corpus_stats(corpus: &Corpus) -> Result<CorpusStats> {
    if corpus.graphs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = corpus.graphs.len() as f64;
    let total_nodes: usize = corpus.graphs.iter().map(|g| g.node_count).sum();
    let total_edges: usize = corpus.graphs.iter().map(|g| g.edge_count()).sum();
    Ok(CorpusStats {
        graph_count: corpus.graphs.len(),
        class_count: corpus.class_count,
        avg_nodes: total_nodes as f64 / n,
        avg_edges: total_edges as f64 / n,
    })
}

/// Pick the conventional feature source for a corpus directory: attributes
/// when the attribute file exists, otherwise one-hot node labels.
pub fn default_feature_mode(root: &Path, name: &str) -> FeatureMode {
    if root.join(format!("{name}_node_attributes.txt")).exists() {
        FeatureMode::AttributesOnly
    } else {
        FeatureMode::OnehotNodeLabels
    }
}

struct RawCorpus {
    graph_of_node: Vec<usize>,    // node (0-based) -> graph (0-based)
    graph_labels: Vec<i64>,       // original labels per graph
    edges: Vec<(usize, usize)>,   // global 0-based node pairs, deduplicated
    node_labels: Option<Vec<i64>>,
    node_attrs: Option<Vec<Vec<f64>>>,
}

/// Parse a corpus directory into memory.
///
/// Node indices are rebased per graph, undirected edges are stored once,
/// and class labels are remapped to 0-based contiguous ids by ascending
/// original value.
pub fn parse_corpus(root_dir: &Path, name: &str, mode: FeatureMode) -> Result<Corpus> {
    let raw = read_raw(root_dir, name, mode)?;
    assemble(name, mode, raw)
}

fn file_path(root: &Path, name: &str, suffix: &str) -> PathBuf {
    root.join(format!("{name}_{suffix}.txt"))
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::FileMissing { path: path.into() }
        } else {
            Error::io(path, e)
        }
    })?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect())
}

fn parse_int(file: &str, line_no: usize, token: &str) -> Result<i64> {
    token.trim().parse().map_err(|_| Error::MalformedLine {
        file: file.to_string(),
        line: line_no,
        reason: format!("expected integer, got {token:?}"),
    })
}

fn parse_real(file: &str, line_no: usize, token: &str) -> Result<f64> {
    token.trim().parse().map_err(|_| Error::MalformedLine {
        file: file.to_string(),
        line: line_no,
        reason: format!("expected real, got {token:?}"),
    })
}

fn read_raw(root: &Path, name: &str, mode: FeatureMode) -> Result<RawCorpus> {
    let indicator_path = file_path(root, name, "graph_indicator");
    let indicator_file = indicator_path.display().to_string();
    let mut graph_of_node = Vec::new();
    for (line_no, line) in read_lines(&indicator_path)? {
        let gid = parse_int(&indicator_file, line_no, &line)?;
        if gid < 1 {
            return Err(Error::MalformedLine {
                file: indicator_file,
                line: line_no,
                reason: format!("graph id {gid} below 1"),
            });
        }
        graph_of_node.push((gid - 1) as usize);
    }
    if graph_of_node.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let labels_path = file_path(root, name, "graph_labels");
    let labels_file = labels_path.display().to_string();
    let mut graph_labels = Vec::new();
    for (line_no, line) in read_lines(&labels_path)? {
        graph_labels.push(parse_int(&labels_file, line_no, &line)?);
    }
    let graph_count = graph_of_node.iter().max().unwrap() + 1;
    if graph_labels.len() != graph_count {
        return Err(Error::RowCountMismatch {
            file: labels_file,
            got: graph_labels.len(),
            expected: graph_count,
        });
    }

    let a_path = file_path(root, name, "A");
    let a_file = a_path.display().to_string();
    let node_count = graph_of_node.len();
    let mut edge_set = BTreeSet::new();
    for (line_no, line) in read_lines(&a_path)? {
        let mut parts = line.split(',');
        let (i, j) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (
                parse_int(&a_file, line_no, a)?,
                parse_int(&a_file, line_no, b)?,
            ),
            _ => {
                return Err(Error::MalformedLine {
                    file: a_file,
                    line: line_no,
                    reason: "expected exactly two comma-separated node ids".to_string(),
                })
            }
        };
        if i < 1 || j < 1 || i as usize > node_count || j as usize > node_count {
            return Err(Error::MalformedLine {
                file: a_file,
                line: line_no,
                reason: format!("node id out of range in edge ({i}, {j})"),
            });
        }
        if i == j {
            return Err(Error::MalformedLine {
                file: a_file,
                line: line_no,
                reason: format!("self-loop on node {i}"),
            });
        }
        let (a, b) = ((i - 1) as usize, (j - 1) as usize);
        edge_set.insert((a.min(b), a.max(b)));
    }
    for &(a, b) in &edge_set {
        if graph_of_node[a] != graph_of_node[b] {
            return Err(Error::CrossGraphEdge {
                a: a + 1,
                b: b + 1,
                graph_a: graph_of_node[a] + 1,
                graph_b: graph_of_node[b] + 1,
            });
        }
    }

    let needs_labels = matches!(
        mode,
        FeatureMode::OnehotNodeLabels | FeatureMode::ConcatAttributesAndOnehot
    );
    let needs_attrs = matches!(
        mode,
        FeatureMode::AttributesOnly | FeatureMode::ConcatAttributesAndOnehot
    );

    let node_labels_path = file_path(root, name, "node_labels");
    let node_labels = if node_labels_path.exists() {
        let file = node_labels_path.display().to_string();
        let mut labels = Vec::new();
        for (line_no, line) in read_lines(&node_labels_path)? {
            labels.push(parse_int(&file, line_no, &line)?);
        }
        if labels.len() != node_count {
            return Err(Error::RowCountMismatch {
                file,
                got: labels.len(),
                expected: node_count,
            });
        }
        Some(labels)
    } else if needs_labels {
        return Err(Error::FeatureSourceMissing {
            mode: mode.to_string(),
            file: node_labels_path.display().to_string(),
        });
    } else {
        None
    };

    let attrs_path = file_path(root, name, "node_attributes");
    let node_attrs = if attrs_path.exists() {
        let file = attrs_path.display().to_string();
        let mut attrs: Vec<Vec<f64>> = Vec::new();
        for (line_no, line) in read_lines(&attrs_path)? {
            let row = line
                .split(',')
                .map(|tok| parse_real(&file, line_no, tok))
                .collect::<Result<Vec<f64>>>()?;
            if let Some(first) = attrs.first() {
                if row.len() != first.len() {
                    return Err(Error::MalformedLine {
                        file,
                        line: line_no,
                        reason: format!(
                            "attribute row has {} values, expected {}",
                            row.len(),
                            first.len()
                        ),
                    });
                }
            }
            attrs.push(row);
        }
        if attrs.len() != node_count {
            return Err(Error::RowCountMismatch {
                file,
                got: attrs.len(),
                expected: node_count,
            });
        }
        Some(attrs)
    } else if needs_attrs {
        return Err(Error::FeatureSourceMissing {
            mode: mode.to_string(),
            file: attrs_path.display().to_string(),
        });
    } else {
        None
    };

    Ok(RawCorpus {
        graph_of_node,
        graph_labels,
        edges: edge_set.into_iter().collect(),
        node_labels,
        node_attrs,
    })
}

/// Assemble one feature row according to the mode.
///
/// `label_alphabet` is the sorted corpus-wide node-label alphabet; one-hot
/// rows sum to exactly 1 and attributes pass through unaltered.
pub fn build_features(
    raw_label: Option<i64>,
    raw_attrs: Option<&[f64]>,
    label_alphabet: &[i64],
    mode: FeatureMode,
) -> Result<Vec<f64>> {
    let onehot = |label: i64| -> Result<Vec<f64>> {
        let pos = label_alphabet
            .binary_search(&label)
            .map_err(|_| Error::Config(format!("node label {label} not in alphabet")))?;
        let mut row = vec![0.0; label_alphabet.len()];
        row[pos] = 1.0;
        Ok(row)
    };
    match mode {
        FeatureMode::AttributesOnly => raw_attrs.map(<[f64]>::to_vec).ok_or_else(|| {
            Error::FeatureSourceMissing {
                mode: mode.to_string(),
                file: "node attributes".to_string(),
            }
        }),
        FeatureMode::OnehotNodeLabels => match raw_label {
            Some(label) => onehot(label),
            None => Err(Error::FeatureSourceMissing {
                mode: mode.to_string(),
                file: "node labels".to_string(),
            }),
        },
        FeatureMode::ConcatAttributesAndOnehot => match (raw_label, raw_attrs) {
            (Some(label), Some(attrs)) => {
                let mut row = onehot(label)?;
                row.extend_from_slice(attrs);
                Ok(row)
            }
            _ => Err(Error::FeatureSourceMissing {
                mode: mode.to_string(),
                file: "node labels and attributes".to_string(),
            }),
        },
    }
}

fn assemble(name: &str, mode: FeatureMode, raw: RawCorpus) -> Result<Corpus> {
    let graph_count = raw.graph_labels.len();
    let node_count = raw.graph_of_node.len();

    // Class labels remapped by ascending original value.
    let class_alphabet: Vec<i64> = raw
        .graph_labels
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let class_of = |l: i64| class_alphabet.binary_search(&l).unwrap();

    let label_alphabet: Vec<i64> = raw
        .node_labels
        .as_deref()
        .map(|labels| labels.iter().copied().collect::<BTreeSet<_>>().into_iter().collect())
        .unwrap_or_default();

    // Rebase nodes: nodes of each graph in ascending global order.
    let mut local_index = vec![0usize; node_count];
    let mut nodes_per_graph = vec![0usize; graph_count];
    for (node, &g) in raw.graph_of_node.iter().enumerate() {
        local_index[node] = nodes_per_graph[g];
        nodes_per_graph[g] += 1;
    }

    let mut edges_per_graph: Vec<Vec<(u32, u32)>> = vec![Vec::new(); graph_count];
    for &(a, b) in &raw.edges {
        let g = raw.graph_of_node[a];
        let (la, lb) = (local_index[a] as u32, local_index[b] as u32);
        edges_per_graph[g].push((la.min(lb), la.max(lb)));
    }

    let mut feature_rows: Vec<Vec<Vec<f64>>> = vec![Vec::new(); graph_count];
    for node in 0..node_count {
        let row = build_features(
            raw.node_labels.as_ref().map(|l| l[node]),
            raw.node_attrs.as_ref().map(|a| a[node].as_slice()),
            &label_alphabet,
            mode,
        )?;
        feature_rows[raw.graph_of_node[node]].push(row);
    }

    let mut graphs = Vec::with_capacity(graph_count);
    for g in 0..graph_count {
        let features = Matrix::from_rows(&feature_rows[g])?;
        features.ensure_finite(&format!("features of graph {}", g + 1))?;
        let mut edges = std::mem::take(&mut edges_per_graph[g]);
        edges.sort_unstable();
        graphs.push(Graph {
            node_count: nodes_per_graph[g],
            edges,
            features,
            label: class_of(raw.graph_labels[g]),
            source_id: (g + 1) as u32,
        });
    }

    Ok(Corpus {
        name: name.to_string(),
        graphs,
        class_count: class_alphabet.len(),
        feature_mode: mode,
    })
}

/// Write a corpus back out in the flat-file layout.
///
/// One-hot and concatenated features cannot be decomposed back into their
/// sources, so the features are always written as `<name>_node_attributes.txt`
/// and the exported corpus re-parses with `AttributesOnly`. Labels are
/// written as the 0-based contiguous ids.
pub fn export_corpus(corpus: &Corpus, root_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(root_dir).map_err(|e| Error::io(root_dir, e))?;
    let name = &corpus.name;
    let write = |suffix: &str, content: String| -> Result<()> {
        let path = file_path(root_dir, name, suffix);
        let mut f = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        f.write_all(content.as_bytes()).map_err(|e| Error::io(&path, e))
    };

    let mut indicator = String::new();
    let mut a_file = String::new();
    let mut labels = String::new();
    let mut attrs = String::new();
    let mut base = 0usize; // global id of the current graph's node 0
    for (gi, g) in corpus.graphs.iter().enumerate() {
        labels.push_str(&format!("{}\n", g.label));
        for node in 0..g.node_count {
            indicator.push_str(&format!("{}\n", gi + 1));
            let row: Vec<String> = g
                .features
                .row(node)
                .iter()
                .map(|v| format!("{v:?}"))
                .collect();
            attrs.push_str(&row.join(", "));
            attrs.push('\n');
        }
        for &(x, y) in &g.edges {
            let (gx, gy) = (base + x as usize + 1, base + y as usize + 1);
            a_file.push_str(&format!("{gx}, {gy}\n{gy}, {gx}\n"));
        }
        base += g.node_count;
    }
    write("graph_indicator", indicator)?;
    write("graph_labels", labels)?;
    write("A", a_file)?;
    write("node_attributes", attrs)
}

//! Frame and graph loading: GRO files, JSON frames or trajectories, and
//! edge-list files for synthetic graphs. Directories expand to their
//! files with the matching extension, sorted lexicographically.

use std::path::{Path, PathBuf};
use waternet::frame::{self, Frame};
use waternet::graph::MolecularGraph;
use waternet::netbuild::{build_graph, CutoffConfig};
use waternet::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    Gro,
    Json,
    Edgelist,
}

impl InputFormat {
    fn extension(&self) -> &'static str {
        match self {
            InputFormat::Gro => "gro",
            InputFormat::Json => "json",
            InputFormat::Edgelist => "edges",
        }
    }
}

/// One frame's worth of input: either coordinates (gro/json) or a
/// ready-made graph (edgelist).
pub struct FrameInput {
    pub source_id: String,
    pub data: FrameData,
}

pub enum FrameData {
    Coordinates(Frame),
    Graph(MolecularGraph),
}

/// A per-file failure that does not stop the run.
#[derive(Debug)]
pub struct FileError {
    pub path: PathBuf,
    pub error: Error,
}

/// Expands inputs to concrete files: directories contribute every file
/// with the format's extension in lexicographic order.
pub fn expand_paths(inputs: &[PathBuf], format: InputFormat) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(input)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", input.display())))?
                .filter_map(|entry| entry.ok())
                .map(|entry| entry.path())
                .filter(|p| {
                    p.is_file()
                        && p.extension()
                            .is_some_and(|ext| ext.eq_ignore_ascii_case(format.extension()))
                })
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    if files.is_empty() {
        return Err(Error::Config("no frames (no input files found)".into()));
    }
    Ok(files)
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Loads every input frame, collecting per-file errors instead of
/// stopping. Species selection applies to coordinate formats only.
pub fn load_frames(
    inputs: &[PathBuf],
    format: InputFormat,
) -> Result<(Vec<FrameInput>, Vec<FileError>)> {
    let files = expand_paths(inputs, format)?;
    let mut frames = Vec::new();
    let mut errors = Vec::new();
    for path in files {
        match load_file(&path, format) {
            Ok(mut loaded) => frames.append(&mut loaded),
            Err(error) => errors.push(FileError { path, error }),
        }
    }
    if frames.is_empty() && !errors.is_empty() {
        let first = &errors[0];
        return Err(Error::Config(format!(
            "no frames could be read; first error at {}: {}",
            first.path.display(),
            first.error
        )));
    }
    Ok((frames, errors))
}

fn load_file(path: &Path, format: InputFormat) -> Result<Vec<FrameInput>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let stem = stem_of(path);
    match format {
        InputFormat::Gro => {
            let mut f = frame::parse_gro(&text)?;
            f.set_source_id(stem.clone());
            Ok(vec![FrameInput {
                source_id: stem,
                data: FrameData::Coordinates(f),
            }])
        }
        InputFormat::Json => {
            // a file is either one frame object or a trajectory array
            if text.trim_start().starts_with('[') {
                let frames = frame::parse_frames_json(&text)?;
                Ok(frames
                    .into_iter()
                    .enumerate()
                    .map(|(i, mut f)| {
                        let id = format!("{stem}_{i:04}");
                        f.set_source_id(id.clone());
                        FrameInput {
                            source_id: id,
                            data: FrameData::Coordinates(f),
                        }
                    })
                    .collect())
            } else {
                let mut f = frame::parse_frame_json(&text)?;
                f.set_source_id(stem.clone());
                Ok(vec![FrameInput {
                    source_id: stem,
                    data: FrameData::Coordinates(f),
                }])
            }
        }
        InputFormat::Edgelist => {
            let g = parse_edgelist(&text)?;
            Ok(vec![FrameInput {
                source_id: stem,
                data: FrameData::Graph(g),
            }])
        }
    }
}

/// Edge-list format: `#` comments, an optional `n <count>` line declaring
/// the node count, and one `u v` pair per line (0-based).
pub fn parse_edgelist(text: &str) -> Result<MolecularGraph> {
    let mut declared_n = 0usize;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_node = |s: &str| -> Result<u32> {
            s.parse::<u32>().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("expected node index, found {s:?}"),
            })
        };
        match fields.as_slice() {
            ["n", count] => {
                declared_n = count.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("bad node count {count:?}"),
                })?;
            }
            [a, b] => edges.push((parse_node(a)?, parse_node(b)?)),
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected 'u v' or 'n <count>', found {line:?}"),
                })
            }
        }
    }
    let max_index = edges
        .iter()
        .map(|&(a, b)| a.max(b) as usize + 1)
        .max()
        .unwrap_or(0);
    MolecularGraph::from_edges(declared_n.max(max_index), edges)
}

/// A fully prepared frame: the graph, plus coordinates when available.
pub struct PreparedFrame {
    pub source_id: String,
    pub graph: MolecularGraph,
    /// Species-selected coordinates (absent for edge-list inputs).
    pub frame: Option<Frame>,
}

/// Builds the molecular graph for every loaded frame: species selection,
/// PBC cutoff graph, and the node map back to original particle indices.
pub fn prepare(
    loaded: Vec<FrameInput>,
    species: &str,
    cfg: &CutoffConfig,
) -> (Vec<PreparedFrame>, Vec<(String, Error)>) {
    let mut prepared = Vec::new();
    let mut errors = Vec::new();
    for input in loaded {
        match input.data {
            FrameData::Graph(graph) => prepared.push(PreparedFrame {
                source_id: input.source_id,
                graph,
                frame: None,
            }),
            FrameData::Coordinates(full) => {
                let indices = frame::species_indices(&full, species);
                let selected = frame::select_species(&full, species);
                match build_graph(&selected, cfg).and_then(|g| g.with_node_map(indices)) {
                    Ok(graph) => prepared.push(PreparedFrame {
                        source_id: input.source_id,
                        graph,
                        frame: Some(selected),
                    }),
                    Err(e) => errors.push((input.source_id, e)),
                }
            }
        }
    }
    (prepared, errors)
}

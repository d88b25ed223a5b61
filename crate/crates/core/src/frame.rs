//! Coordinate frame parsing: GRO files, a JSON frame format, and species selection.
//!
//! All coordinates are kept in nm. Only rectangular boxes are supported;
//! the minimum-image folding downstream assumes orthogonal axes.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One snapshot: particle positions inside a rectangular periodic box.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    positions: Vec<[f64; 3]>,
    box_lengths: [f64; 3],
    labels: Vec<String>,
    source_id: String,
}

impl Frame {
    /// Validates the frame invariants: positive box, matching lengths,
    /// finite coordinates.
    pub fn new(
        positions: Vec<[f64; 3]>,
        box_lengths: [f64; 3],
        labels: Vec<String>,
        source_id: impl Into<String>,
    ) -> Result<Self> {
        if box_lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidFrame(format!(
                "non-positive box component in {:?}",
                box_lengths
            )));
        }
        if positions.len() != labels.len() {
            return Err(Error::InvalidFrame(format!(
                "{} positions but {} labels",
                positions.len(),
                labels.len()
            )));
        }
        if let Some(i) = positions
            .iter()
            .position(|p| p.iter().any(|c| !c.is_finite()))
        {
            return Err(Error::InvalidFrame(format!(
                "non-finite coordinate for particle {i}"
            )));
        }
        Ok(Frame {
            positions,
            box_lengths,
            labels,
            source_id: source_id.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    pub fn box_lengths(&self) -> [f64; 3] {
        self.box_lengths
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn set_source_id(&mut self, id: impl Into<String>) {
        self.source_id = id.into();
    }
}

fn parse_float(field: &str, line: usize, what: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("non-numeric {what} field {:?}", field.trim()),
    })
}

/// Parses a GRO file: title line, atom-count line, fixed-width atom lines
/// (atom name in columns 11-15, coordinates in 21-28 / 29-36 / 37-44, nm),
/// and a final box line with three floats.
///
/// Nine-component (triclinic) box lines are rejected; the network
/// construction assumes a rectangular box.
pub fn parse_gro(text: &str) -> Result<Frame> {
    let mut lines = text.lines();

    let _title = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input, expected title line".into(),
    })?;

    let count_line = lines.next().ok_or(Error::Parse {
        line: 2,
        message: "missing atom-count line".into(),
    })?;
    let count: usize = count_line.trim().parse().map_err(|_| Error::Parse {
        line: 2,
        message: format!("malformed atom-count line {:?}", count_line.trim()),
    })?;

    let mut positions = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);
    for i in 0..count {
        let line_no = 3 + i;
        let line = lines.next().ok_or(Error::Parse {
            line: line_no,
            message: format!("expected atom line {} of {count}, found end of file", i + 1),
        })?;
        // A 3-float box line where an atom was declared means the file is short.
        if line.len() < 44 {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected atom line {} of {count}, line too short ({} chars)",
                    i + 1,
                    line.len()
                ),
            });
        }
        let name = line[10..15].trim().to_string();
        let x = parse_float(&line[20..28], line_no, "x")?;
        let y = parse_float(&line[28..36], line_no, "y")?;
        let z = parse_float(&line[36..44], line_no, "z")?;
        positions.push([x, y, z]);
        labels.push(name);
    }

    let box_line_no = 3 + count;
    let box_line = lines.next().ok_or(Error::Parse {
        line: box_line_no,
        message: "missing box line".into(),
    })?;
    let fields: Vec<&str> = box_line.split_whitespace().collect();
    if fields.len() == 9 {
        return Err(Error::Parse {
            line: box_line_no,
            message: "triclinic box (9 components) not supported; only rectangular boxes".into(),
        });
    }
    if fields.len() != 3 {
        return Err(Error::Parse {
            line: box_line_no,
            message: format!("expected 3 box components, found {}", fields.len()),
        });
    }
    let bx = parse_float(fields[0], box_line_no, "box")?;
    let by = parse_float(fields[1], box_line_no, "box")?;
    let bz = parse_float(fields[2], box_line_no, "box")?;

    Frame::new(positions, [bx, by, bz], labels, "")
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    #[serde(rename = "box")]
    box_lengths: Vec<f64>,
    positions: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Parses the JSON frame format:
/// `{"box":[Lx,Ly,Lz],"positions":[[x,y,z],...],"labels":[...]}`.
/// When `labels` is absent every particle is labelled `"OW"`.
pub fn parse_frame_json(text: &str) -> Result<Frame> {
    let raw: FrameJson = serde_json::from_str(text)?;
    frame_from_json(raw)
}

fn frame_from_json(raw: FrameJson) -> Result<Frame> {
    if raw.box_lengths.len() != 3 {
        return Err(Error::InvalidFrame(format!(
            "box must have 3 components, found {}",
            raw.box_lengths.len()
        )));
    }
    let box_lengths = [raw.box_lengths[0], raw.box_lengths[1], raw.box_lengths[2]];
    if box_lengths.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidFrame("non-positive box component".into()));
    }
    let mut positions = Vec::with_capacity(raw.positions.len());
    for (i, p) in raw.positions.iter().enumerate() {
        if p.len() != 3 {
            return Err(Error::InvalidFrame(format!(
                "position {i} has {} components, expected 3",
                p.len()
            )));
        }
        positions.push([p[0], p[1], p[2]]);
    }
    let labels = match raw.labels {
        Some(l) => {
            if l.len() != positions.len() {
                return Err(Error::InvalidFrame(format!(
                    "{} labels for {} positions",
                    l.len(),
                    positions.len()
                )));
            }
            l
        }
        None => vec!["OW".to_string(); positions.len()],
    };
    Frame::new(positions, box_lengths, labels, "")
}

/// Parses a JSON array of frames (one trajectory file). `source_id` is the
/// array index unless set later by the caller.
pub fn parse_frames_json(text: &str) -> Result<Vec<Frame>> {
    let raws: Vec<FrameJson> = serde_json::from_str(text)?;
    let mut frames = Vec::with_capacity(raws.len());
    for (i, raw) in raws.into_iter().enumerate() {
        let mut f = frame_from_json(raw)?;
        f.set_source_id(i.to_string());
        frames.push(f);
    }
    Ok(frames)
}

/// Serializes a frame back to the JSON frame format. Positions and box
/// round-trip bit-exactly through `parse_frame_json`.
pub fn frame_to_json(frame: &Frame) -> String {
    let raw = FrameJson {
        box_lengths: frame.box_lengths.to_vec(),
        positions: frame.positions.iter().map(|p| p.to_vec()).collect(),
        labels: Some(frame.labels.clone()),
    };
    serde_json::to_string(&raw).expect("frame serialization cannot fail")
}

/// Keeps only particles whose label equals `name`, preserving order and box.
pub fn select_species(frame: &Frame, name: &str) -> Frame {
    let mut positions = Vec::new();
    let mut labels = Vec::new();
    for (p, l) in frame.positions.iter().zip(&frame.labels) {
        if l == name {
            positions.push(*p);
            labels.push(l.clone());
        }
    }
    Frame {
        positions,
        box_lengths: frame.box_lengths,
        labels,
        source_id: frame.source_id.clone(),
    }
}

/// Indices (into the unfiltered frame) of the particles `select_species`
/// would keep. Used to map graph nodes back to original particles.
pub fn species_indices(frame: &Frame, name: &str) -> Vec<usize> {
    frame
        .labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.as_str() == name)
        .map(|(i, _)| i)
        .collect()
}

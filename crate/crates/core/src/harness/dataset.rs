use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::validate_labels;
use crate::tensor::{read_t3b, Tensor3};

/// Where the samples live in the data tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Sample `i` is the horizontal slice `X(i, :, :)`: `n x p x n3`.
    #[default]
    SamplesMode1,
    /// Sample `j` is the lateral slice `X(:, j, :)`: `p x n x n3`.
    SamplesLateral,
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "samples-mode1" | "mode1" => Ok(Orientation::SamplesMode1),
            "samples-lateral" | "lateral" => Ok(Orientation::SamplesLateral),
            other => Err(format!(
                "unknown orientation '{other}' (expected samples-mode1 or samples-lateral)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Tensor3,
    pub labels: Option<Vec<usize>>,
    pub name: String,
    pub orientation: Orientation,
}

impl Dataset {
    /// Validates that labels match the sample count and are `1..=c` with
    /// every class present.
    pub fn new(x: Tensor3, labels: Option<Vec<usize>>, name: impl Into<String>, orientation: Orientation) -> Result<Self> {
        let ds = Self {
            x,
            labels,
            name: name.into(),
            orientation,
        };
        if let Some(l) = &ds.labels {
            let c = validate_labels(l, ds.samples())?;
            let mut seen = vec![false; c];
            for &v in l {
                seen[v - 1] = true;
            }
            if let Some(missing) = seen.iter().position(|s| !s) {
                return Err(Error::InvalidLabels(format!(
                    "labels must cover 1..={c} contiguously; class {} is missing",
                    missing + 1
                )));
            }
        }
        Ok(ds)
    }

    pub fn samples(&self) -> usize {
        match self.orientation {
            Orientation::SamplesMode1 => self.x.n1(),
            Orientation::SamplesLateral => self.x.n2(),
        }
    }

    pub fn classes(&self) -> usize {
        self.labels
            .as_ref()
            .map_or(0, |l| l.iter().copied().max().unwrap_or(0))
    }

    /// The data with samples as mode-1 slices.
    pub fn samples_mode1(&self) -> Tensor3 {
        match self.orientation {
            Orientation::SamplesMode1 => self.x.clone(),
            Orientation::SamplesLateral => self.x.swap_modes12(),
        }
    }
}

/// One positive integer label per line; blank lines are ignored.
pub fn parse_labels(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(no, l)| {
            l.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidLabels(format!("line {}: '{}' is not a label", no + 1, l.trim())))
        })
        .collect()
}

pub fn read_labels(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    parse_labels(&fs::read_to_string(path)?)
}

pub fn write_labels(path: impl AsRef<Path>, labels: &[usize]) -> Result<()> {
    let mut text = String::with_capacity(labels.len() * 3);
    for l in labels {
        text.push_str(&l.to_string());
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn load_dataset(
    tensor_path: impl AsRef<Path>,
    labels_path: Option<&Path>,
    orientation: Orientation,
) -> Result<Dataset> {
    let tensor_path = tensor_path.as_ref();
    let x = read_t3b(tensor_path)?;
    let labels = labels_path.map(read_labels).transpose()?;
    let name = tensor_path
        .file_stem()
        .map_or_else(|| "dataset".to_string(), |s| s.to_string_lossy().into_owned());
    Dataset::new(x, labels, name, orientation)
}

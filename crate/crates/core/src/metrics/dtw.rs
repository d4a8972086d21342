use super::FeatureSequence;
use crate::error::{Error, Result};

/// Result of aligning two sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    /// Sum of local costs along the chosen path.
    pub cost: f64,
    /// Number of cells on the chosen path.
    pub path_len: usize,
}

impl Alignment {
    pub fn normalized(&self) -> f64 {
        self.cost / self.path_len as f64
    }

    /// Lower cost wins; equal costs prefer the shorter path.
    fn better_than(&self, other: &Alignment) -> bool {
        self.cost < other.cost || (self.cost == other.cost && self.path_len < other.path_len)
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Minimum-cost monotone alignment from `(0, 0)` to `(T_a - 1, T_b - 1)` with
/// steps `(1,0)`, `(0,1)`, `(1,1)` and Euclidean frame distance.
pub fn dtw_alignment(a: &FeatureSequence, b: &FeatureSequence) -> Result<Alignment> {
    if a.kind != b.kind || a.dim() != b.dim() {
        return Err(Error::InvalidInput(format!(
            "cannot align {:?}[{}] with {:?}[{}]",
            a.kind,
            a.dim(),
            b.kind,
            b.dim()
        )));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("cannot align an empty sequence".into()));
    }

    let cols = b.len();
    let mut prev: Vec<Alignment> = Vec::with_capacity(cols);
    let mut row: Vec<Alignment> = Vec::with_capacity(cols);
    for (i, fa) in a.frames.iter().enumerate() {
        row.clear();
        for (j, fb) in b.frames.iter().enumerate() {
            let local = euclidean(fa, fb);
            let best = if i == 0 && j == 0 {
                Alignment {
                    cost: 0.0,
                    path_len: 0,
                }
            } else {
                [
                    (i > 0 && j > 0).then(|| prev[j - 1]),
                    (i > 0).then(|| prev[j]),
                    (j > 0).then(|| row[j - 1]),
                ]
                .into_iter()
                .flatten()
                .reduce(|acc, c| if c.better_than(&acc) { c } else { acc })
                .expect("at least one predecessor")
            };
            row.push(Alignment {
                cost: best.cost + local,
                path_len: best.path_len + 1,
            });
        }
        std::mem::swap(&mut prev, &mut row);
    }
    Ok(prev[cols - 1])
}

/// DTW cost divided by the length of the optimal warping path.
pub fn dtw_distance(a: &FeatureSequence, b: &FeatureSequence) -> Result<f64> {
    dtw_alignment(a, b).map(|al| al.normalized())
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Windowed family of projections: all `s`-tuples `i_1 < .. < i_s <= d`
/// with `i_s - i_1 + 1 <= w_s`, for `s = 2..=D`. Dimensions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionFamily {
    max_order: usize,
    dimension: usize,
    windows: Vec<usize>,
}

impl ProjectionFamily {
    /// `windows[s - 2]` is `w_s`.
    pub fn new(max_order: usize, dimension: usize, windows: Vec<usize>) -> Result<Self> {
        if max_order < 2 {
            return Err(Error::InvalidArgument("projection order D must be at least 2".into()));
        }
        if windows.len() != max_order - 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} window sizes, got {}",
                max_order - 1,
                windows.len()
            )));
        }
        for (i, &w) in windows.iter().enumerate() {
            if w < i + 2 {
                return Err(Error::InvalidArgument(format!("window w_{} = {w} is below {}", i + 2, i + 2)));
            }
        }
        Ok(ProjectionFamily {
            max_order,
            dimension,
            windows,
        })
    }

    /// Pairs only, window `w2`.
    pub fn pairs(dimension: usize, w2: usize) -> Result<Self> {
        Self::new(2, dimension, vec![w2])
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn windows(&self) -> &[usize] {
        &self.windows
    }

    /// All projections, ordered by size then lexicographically; 1-based.
    pub fn projections(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for s in 2..=self.max_order {
            let w = self.windows[s - 2];
            for first in 1..=self.dimension {
                let last = self.dimension.min(first + w - 1);
                let mut tuple = vec![first];
                extend(&mut tuple, s, last, &mut out);
            }
        }
        out
    }

    /// The cardinality `P`, counted without materialising the tuples.
    pub fn len(&self) -> usize {
        let mut total = 0usize;
        for s in 2..=self.max_order {
            let w = self.windows[s - 2];
            for first in 1..=self.dimension {
                let span = self.dimension.min(first + w - 1) - first;
                total += binomial(span, s - 1);
            }
        }
        total
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn extend(tuple: &mut Vec<usize>, s: usize, last: usize, out: &mut Vec<Vec<usize>>) {
    if tuple.len() == s {
        out.push(tuple.clone());
        return;
    }
    let from = tuple[tuple.len() - 1] + 1;
    for next in from..=last {
        tuple.push(next);
        extend(tuple, s, last, out);
        tuple.pop();
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

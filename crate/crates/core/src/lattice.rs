//! Alignment as last passage percolation on the oriented grid with
//! diagonal edges.
//!
//! Vertex `(z, w)` has three outgoing edges: diagonal to `(z+1, w+1)` with
//! weight `S(x_{z+1}, y_{w+1})`, horizontal to `(z+1, w)` with weight
//! `S(x_{z+1}, G)` and vertical to `(z, w+1)` with weight `S(G, y_{w+1})`.
//! A maximum weight path from `(0,0)` to `(n,n)` is an optimal alignment:
//! diagonal edges pair letters, the other edges pair a letter with a gap.
//!
//! Weights are never stored; they are read from the strings on demand.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::alignment::{steps_from_str, steps_to_string, Alignment, Step};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scoring::ScoringFunction;
use crate::sequence::LetterString;

#[derive(Debug, Clone, Copy)]
pub struct LatticeInstance<'a, T> {
    x: &'a LetterString,
    y: &'a LetterString,
    scoring: &'a ScoringFunction<T>,
}

pub fn build_lattice<'a, T: Scalar>(
    x: &'a LetterString,
    y: &'a LetterString,
    scoring: &'a ScoringFunction<T>,
) -> Result<LatticeInstance<'a, T>> {
    if x.len() != y.len() {
        return Err(Error::UnequalLengths { x: x.len(), y: y.len() });
    }
    Ok(LatticeInstance { x, y, scoring })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Objective {
    Max,
    Min,
}

impl<'a, T: Scalar> LatticeInstance<'a, T> {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Weight of the edge leaving `(z, w)` in direction `step`, or `None`
    /// if the edge leaves the `n x n` box.
    pub fn weight(&self, z: usize, w: usize, step: Step) -> Option<T> {
        let (dz, dw) = step.delta();
        if z + dz > self.n() || w + dw > self.n() {
            return None;
        }
        let (xs, ys) = (self.x.letters(), self.y.letters());
        Some(match step {
            Step::Diagonal => self.scoring.letter_letter(xs[z], ys[w]),
            Step::Horizontal => self.scoring.letter_gap(xs[z]),
            Step::Vertical => self.scoring.gap_letter(ys[w]),
        })
    }

    pub fn path_weight(&self, path: &LatticePath) -> Result<T> {
        let (mut z, mut w) = (0, 0);
        let mut total = T::zero();
        for &step in &path.steps {
            total = total + self.weight(z, w, step).ok_or_else(|| Error::InvalidPath("leaves the grid".into()))?;
            let (dz, dw) = step.delta();
            z += dz;
            w += dw;
        }
        if (z, w) != (self.n(), self.n()) {
            return Err(Error::InvalidPath(format!("ends at ({z}, {w})")));
        }
        Ok(total)
    }

    /// Value of the heaviest path, computed with one rolling row.
    pub fn max_weight(&self) -> T {
        let n = self.n();
        let mut row = vec![T::zero(); n + 1];
        for w in 0..n {
            row[w + 1] = row[w] + self.scoring.gap_letter(self.y.letters()[w]);
        }
        for z in 0..n {
            let mut diag_src = row[0];
            row[0] = row[0] + self.scoring.letter_gap(self.x.letters()[z]);
            for w in 0..n {
                let d = diag_src + self.scoring.letter_letter(self.x.letters()[z], self.y.letters()[w]);
                let h = row[w + 1] + self.scoring.letter_gap(self.x.letters()[z]);
                let v = row[w] + self.scoring.gap_letter(self.y.letters()[w]);
                diag_src = row[w + 1];
                row[w + 1] = T::max_of(T::max_of(d, h), v);
            }
        }
        row[n]
    }

    fn extremal_path(&self, objective: Objective) -> (T, LatticePath) {
        let n = self.n();
        let side = n + 1;
        let mut value = vec![T::zero(); side * side];
        let mut choice = vec![Step::Diagonal; side * side];
        let better = |a: T, b: T| match objective {
            Objective::Max => a > b,
            Objective::Min => a < b,
        };
        for z in 0..=n {
            for w in 0..=n {
                if (z, w) == (0, 0) {
                    continue;
                }
                let mut best: Option<(T, Step)> = None;
                for step in Step::ALL {
                    let (dz, dw) = step.delta();
                    if z < dz || w < dw {
                        continue;
                    }
                    let (pz, pw) = (z - dz, w - dw);
                    let cand = value[pz * side + pw] + self.weight(pz, pw, step).expect("inside the box");
                    // Strict improvement only, so earlier steps win ties.
                    if best.is_none_or(|(b, _)| better(cand, b)) {
                        best = Some((cand, step));
                    }
                }
                let (v, s) = best.expect("every non-origin vertex has a predecessor");
                value[z * side + w] = v;
                choice[z * side + w] = s;
            }
        }
        let mut steps = Vec::with_capacity(2 * n);
        let (mut z, mut w) = (n, n);
        while (z, w) != (0, 0) {
            let s = choice[z * side + w];
            steps.push(s);
            let (dz, dw) = s.delta();
            z -= dz;
            w -= dw;
        }
        steps.reverse();
        (value[side * side - 1], LatticePath { steps })
    }

    /// Heaviest path from `(0,0)` to `(n,n)`. Among equal-weight
    /// predecessors the diagonal edge is preferred, then horizontal.
    pub fn max_weight_path(&self) -> (T, LatticePath) {
        self.extremal_path(Objective::Max)
    }

    /// Lightest path (first passage time) with the same tie rule.
    pub fn min_weight_path(&self) -> (T, LatticePath) {
        self.extremal_path(Objective::Min)
    }

    /// Alignment read off a path: diagonal edges align letters, the rest
    /// align a letter with a gap.
    pub fn decode(&self, path: &LatticePath) -> Result<Alignment> {
        Alignment::from_steps(self.x, self.y, &path.steps)
    }

    pub fn encode(&self, alignment: &Alignment) -> Result<LatticePath> {
        if !alignment.aligns(self.x, self.y) {
            return Err(Error::InvalidAlignment("alignment does not align these strings".into()));
        }
        Ok(LatticePath { steps: alignment.steps() })
    }
}

pub fn max_weight_path<T: Scalar>(instance: &LatticeInstance<'_, T>) -> (T, LatticePath) {
    instance.max_weight_path()
}

/// Oriented path through the grid, as a sequence of steps from the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LatticePath {
    steps: Vec<Step>,
}

impl LatticePath {
    /// Validates that `steps` runs from `(0,0)` to `(n,n)`.
    pub fn new(steps: Vec<Step>, n: usize) -> Result<Self> {
        let (z, w) = steps.iter().fold((0, 0), |(z, w), s| {
            let (dz, dw) = s.delta();
            (z + dz, w + dw)
        });
        if (z, w) != (n, n) {
            return Err(Error::InvalidPath(format!("ends at ({z}, {w}), expected ({n}, {n})")));
        }
        Ok(LatticePath { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Numbers of diagonal, horizontal and vertical edges.
    pub fn edge_counts(&self) -> (usize, usize, usize) {
        self.steps.iter().fold((0, 0, 0), |(d, h, v), s| match s {
            Step::Diagonal => (d + 1, h, v),
            Step::Horizontal => (d, h + 1, v),
            Step::Vertical => (d, h, v + 1),
        })
    }

    /// Edge counts divided by `n`.
    pub fn edge_proportions(&self, n: usize) -> Result<EdgeProportions> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let (d, h, v) = self.edge_counts();
        let n = n as f64;
        Ok(EdgeProportions { diagonal: d as f64 / n, horizontal: h as f64 / n, vertical: v as f64 / n })
    }
}

pub fn edge_proportions(path: &LatticePath, n: usize) -> Result<EdgeProportions> {
    path.edge_proportions(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeProportions {
    pub diagonal: f64,
    pub horizontal: f64,
    pub vertical: f64,
}

impl Serialize for LatticePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&steps_to_string(&self.steps))
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    /// Parses a `{D, H, V}` string; the end point is inferred.
    fn from_str(s: &str) -> Result<Self> {
        let steps = steps_from_str(s)?;
        let (d, h, v) = LatticePath { steps: steps.clone() }.edge_counts();
        if h != v {
            return Err(Error::InvalidPath("path does not end on the diagonal".into()));
        }
        LatticePath::new(steps, d + h)
    }
}

//! Lower Newton polygon of the points (i, v(c_i)).

use num_rational::BigRational;
use num_traits::Zero;

use crate::hahn::Exponent;

/// A hull segment: roots of valuation `r` correspond to it, and
/// `end − start` of them are counted with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub r: Exponent,
    pub start: usize,
    pub end: usize,
    /// Every index whose point lies on the segment.
    pub on_edge: Vec<usize>,
}

impl Edge {
    pub fn length(&self) -> usize {
        self.end - self.start
    }
}

/// Edges of the lower convex hull of `points` (sorted by index), left to right.
pub fn lower_edges(points: &[(usize, Exponent)]) -> Vec<Edge> {
    let x = |i: usize| BigRational::from_integer((points[i].0 as i64).into());
    let y = |i: usize| points[i].1.as_ratio().clone();
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..points.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // keep b only if a → b → k turns counterclockwise
            let cross = (x(b) - x(a)) * (y(k) - y(a)) - (y(b) - y(a)) * (x(k) - x(a));
            if cross <= BigRational::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let slope = (y(b) - y(a)) / (x(b) - x(a));
            let on_edge = (a..=b)
                .filter(|&k| y(k) - y(a) == &slope * (x(k) - x(a)))
                .map(|k| points[k].0)
                .collect();
            Edge { r: Exponent::from_ratio(-slope), start: points[a].0, end: points[b].0, on_edge }
        })
        .collect()
}

//! Newton polygons of polynomials over `F(t)` with respect to the place at
//! infinity.

use super::field::Field;
use super::ratfunc::{RatFunc, RatFuncField};
use crate::error::{Error, Result};
use num_rational::Ratio;

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPolygon {
    /// `(i, v_inf(a_i))` for every nonzero coefficient.
    pub points: Vec<(usize, i64)>,
    /// Lower convex hull as `(slope, horizontal length)`, slopes increasing.
    pub segments: Vec<(Ratio<i64>, usize)>,
    /// Number of roots equal to zero (index of the first nonzero coefficient).
    pub zero_roots: usize,
}

impl NewtonPolygon {
    /// Valuations of the nonzero roots, sorted, with multiplicity.
    pub fn root_valuations(&self) -> Vec<Ratio<i64>> {
        let mut out: Vec<Ratio<i64>> = self
            .segments
            .iter()
            .flat_map(|(s, len)| std::iter::repeat_n(-*s, *len))
            .collect();
        out.sort();
        out
    }
}

/// Polygon of `sum a_i X^i`, coefficients listed from the constant term.
pub fn newton_polygon_at_infinity<F: Field>(q: &RatFuncField<F>, coeffs: &[RatFunc<F::Elem>]) -> Result<NewtonPolygon> {
    let points: Vec<(usize, i64)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| q.inf_valuation(c).map(|v| (i, v)))
        .collect();
    if points.is_empty() {
        return Err(Error::input("Newton polygon of the zero polynomial"));
    }
    let zero_roots = points[0].0;
    // lower hull by monotone chain
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point when it lies on or above the chord
            let cross = (x2 as i64 - x1 as i64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as i64 - x1 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let run = (w[1].0 - w[0].0) as i64;
            (Ratio::new(w[1].1 - w[0].1, run), run as usize)
        })
        .collect();
    Ok(NewtonPolygon {
        points,
        segments,
        zero_roots,
    })
}

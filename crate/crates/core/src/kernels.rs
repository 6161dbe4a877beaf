//! Point kernels over four (or three) observations and the planar
//! classification of quadruples.
//!
//! The `a` kernel is defined by its indicator form
//!
//! ```text
//! a(z1,z2,z3,z4) = I(z1,z2 < z3,z4) + I(z1,z2 > z3,z4)
//!                - I(z1,z3 < z2,z4) - I(z1,z3 > z2,z4)
//! ```
//!
//! where `I(z1,z2 < z3,z4)` requires all four strict inequalities. On the
//! real line this coincides with `sign(|z1-z3| + |z2-z4| - |z1-z2| - |z3-z4|)`,
//! which is the form that generalises to metric spaces.

use crate::error::{ensure_finite, Error, Result};

/// Geometric class of a set of four planar points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadrupleClass {
    /// Axes exist such that two opposing open quadrants hold two points each.
    Concordant,
    /// Axes exist such that every open quadrant holds exactly one point.
    Discordant,
    /// Neither of the above.
    Tied,
}

/// Kernels understood by the table contraction engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelId {
    /// The sign kernel `a` applied to category scores.
    SignA,
    /// The `h` kernel applied to mid-distribution grades of the categories.
    GradeH,
}

#[inline]
fn sign_f64(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Unchecked `a` kernel; callers guarantee finite input.
#[inline(always)]
pub(crate) fn a_sign(z1: f64, z2: f64, z3: f64, z4: f64) -> i8 {
    let lo12 = z1.max(z2) < z3.min(z4);
    let hi12 = z1.min(z2) > z3.max(z4);
    let lo13 = z1.max(z3) < z2.min(z4);
    let hi13 = z1.min(z3) > z2.max(z4);
    (lo12 | hi12) as i8 - (lo13 | hi13) as i8
}

/// Unchecked `h` kernel.
#[inline(always)]
pub(crate) fn h_value(z1: f64, z2: f64, z3: f64, z4: f64) -> f64 {
    (z1 - z2).abs() + (z3 - z4).abs() - (z1 - z3).abs() - (z2 - z4).abs()
}

/// `sign((z1 - z3)(z2 - z4))`, the kernel whose double contraction gives the
/// square of Kendall's t.
pub fn sign_s(z1: f64, z2: f64, z3: f64, z4: f64) -> Result<i8> {
    ensure_finite(&[z1, z2, z3, z4], "sign_s")?;
    Ok(sign_f64(z1 - z3) * sign_f64(z2 - z4))
}

/// The `a` kernel in its indicator form.
pub fn a_kernel(z1: f64, z2: f64, z3: f64, z4: f64) -> Result<i8> {
    ensure_finite(&[z1, z2, z3, z4], "a_kernel")?;
    Ok(a_sign(z1, z2, z3, z4))
}

/// Euclidean distance between two points of equal dimension.
#[inline]
pub(crate) fn euclidean(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Relative tolerance under which the distance comparison of
/// [`a_kernel_metric`] is treated as an exact tie.
pub const METRIC_TIE_TOLERANCE: f64 = 1e-12;

/// Unchecked metric `a` kernel.
pub(crate) fn a_sign_metric(p1: &[f64], p2: &[f64], p3: &[f64], p4: &[f64]) -> i8 {
    let d13 = euclidean(p1, p3);
    let d24 = euclidean(p2, p4);
    let d12 = euclidean(p1, p2);
    let d34 = euclidean(p3, p4);
    let diff = (d13 + d24) - (d12 + d34);
    let scale = d13 + d24 + d12 + d34;
    if diff.abs() <= METRIC_TIE_TOLERANCE * scale {
        0
    } else {
        sign_f64(diff)
    }
}

/// The `a` kernel for points in `R^m` under the Euclidean metric:
/// `sign(d(p1,p3) + d(p2,p4) - d(p1,p2) - d(p3,p4))`.
///
/// Distance sums that agree to a relative [`METRIC_TIE_TOLERANCE`] count as
/// equal, so that ties which hold in exact arithmetic survive rounding.
pub fn a_kernel_metric(p1: &[f64], p2: &[f64], p3: &[f64], p4: &[f64]) -> Result<i8> {
    let m = p1.len();
    if m == 0 {
        return Err(Error::invalid(
            "a_kernel_metric: points must have dimension >= 1",
        ));
    }
    for (k, p) in [p2, p3, p4].iter().enumerate() {
        if p.len() != m {
            return Err(Error::invalid(format!(
                "a_kernel_metric: point {} has dimension {}, expected {m}",
                k + 2,
                p.len()
            )));
        }
    }
    for p in [p1, p2, p3, p4] {
        ensure_finite(p, "a_kernel_metric")?;
    }
    Ok(a_sign_metric(p1, p2, p3, p4))
}

/// `h(z1,z2,z3,z4) = |z1-z2| + |z3-z4| - |z1-z3| - |z2-z4|`.
pub fn h_kernel(z1: f64, z2: f64, z3: f64, z4: f64) -> Result<f64> {
    ensure_finite(&[z1, z2, z3, z4], "h_kernel")?;
    Ok(h_value(z1, z2, z3, z4))
}

/// `phi(z1,z2,z3) = I(z1 >= z2) - I(z1 >= z3)`.
pub fn phi_kernel(z1: f64, z2: f64, z3: f64) -> Result<i8> {
    ensure_finite(&[z1, z2, z3], "phi_kernel")?;
    Ok(phi_value(z1, z2, z3))
}

#[inline(always)]
pub(crate) fn phi_value(z1: f64, z2: f64, z3: f64) -> i8 {
    (z1 >= z2) as i8 - (z1 >= z3) as i8
}

// The three ways of splitting four labels into two pairs.
const SPLITS: [([usize; 2], [usize; 2]); 3] =
    [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];

fn strict_split(values: [f64; 4]) -> Option<usize> {
    SPLITS.iter().position(|(a, b)| {
        let (amax, amin) = (
            values[a[0]].max(values[a[1]]),
            values[a[0]].min(values[a[1]]),
        );
        let (bmax, bmin) = (
            values[b[0]].max(values[b[1]]),
            values[b[0]].min(values[b[1]]),
        );
        amax < bmin || amin > bmax
    })
}

/// Classifies four planar points by exhaustive search over the 2-2 splits
/// that strictly separate them along each axis.
///
/// A strict 2-2 split along one axis, when it exists, is unique: the lower
/// pair must be the two smallest coordinates. The quadruple is concordant
/// when both axes split it into the same pairs and discordant when the
/// pairs differ (then every open quadrant holds one point).
pub fn classify_quadruple(points: &[(f64, f64); 4]) -> Result<QuadrupleClass> {
    for &(x, y) in points {
        ensure_finite(&[x, y], "classify_quadruple")?;
    }
    Ok(classify_unchecked(points))
}

pub(crate) fn classify_unchecked(points: &[(f64, f64); 4]) -> QuadrupleClass {
    let xs = [points[0].0, points[1].0, points[2].0, points[3].0];
    let ys = [points[0].1, points[1].1, points[2].1, points[3].1];
    match (strict_split(xs), strict_split(ys)) {
        (Some(sx), Some(sy)) if sx == sy => QuadrupleClass::Concordant,
        (Some(_), Some(_)) => QuadrupleClass::Discordant,
        _ => QuadrupleClass::Tied,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_s_examples() {
        assert_eq!(sign_s(1.0, 2.0, 3.0, 4.0).unwrap(), 1);
        assert_eq!(sign_s(1.0, 2.0, 1.0, 3.0).unwrap(), 0);
        assert_eq!(sign_s(3.0, 2.0, 1.0, 4.0).unwrap(), -1);
    }

    #[test]
    fn a_kernel_examples() {
        assert_eq!(a_kernel(1.0, 2.0, 3.0, 4.0).unwrap(), 1);
        assert_eq!(a_kernel(1.0, 3.0, 2.0, 4.0).unwrap(), -1);
        assert_eq!(a_kernel(5.0, 5.0, 5.0, 5.0).unwrap(), 0);
        assert_eq!(a_kernel(0.0, 1.0, 1.0, 2.0).unwrap(), 0);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        assert!(matches!(
            a_kernel(f64::NAN, 0.0, 0.0, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(sign_s(0.0, f64::INFINITY, 0.0, 0.0).is_err());
        assert!(h_kernel(0.0, 0.0, f64::NEG_INFINITY, 0.0).is_err());
        assert!(phi_kernel(0.0, 0.0, f64::NAN).is_err());
        assert!(
            classify_quadruple(&[(0.0, 0.0), (1.0, f64::NAN), (2.0, 2.0), (3.0, 3.0)]).is_err()
        );
    }

    #[test]
    fn a_kernel_form_equivalence_on_grid() {
        for code in 0..256u32 {
            let z: Vec<f64> = (0..4).map(|k| ((code >> (2 * k)) & 3) as f64).collect();
            let (z1, z2, z3, z4) = (z[0], z[1], z[2], z[3]);
            let ind = a_kernel(z1, z2, z3, z4).unwrap();
            let dist =
                sign_f64((z1 - z3).abs() + (z2 - z4).abs() - (z1 - z2).abs() - (z3 - z4).abs());
            let distance_form =
                sign_f64((z1 - z2).abs() + (z3 - z4).abs() - (z1 - z3).abs() - (z2 - z4).abs());
            assert_eq!(ind, dist, "{z:?}");
            assert_eq!(ind, -distance_form, "{z:?}");
        }
    }

    #[test]
    fn a_kernel_symmetries_on_grid() {
        for code in 0..256u32 {
            let z: Vec<f64> = (0..4).map(|k| ((code >> (2 * k)) & 3) as f64).collect();
            let a = |p: [usize; 4]| a_sign(z[p[0]], z[p[1]], z[p[2]], z[p[3]]);
            let base = a([0, 1, 2, 3]);
            assert_eq!(a([1, 0, 3, 2]), base);
            assert_eq!(a([3, 2, 1, 0]), base);
            assert_eq!(a([2, 3, 0, 1]), base);
            assert_eq!(a([0, 2, 1, 3]), -base);
        }
    }

    // Exchanging only z1 and z2, or only z3 and z4, is not a symmetry of a:
    // it turns the {13|24} pairing into {14|23}.
    #[test]
    fn exchanging_one_pair_alone_can_change_a() {
        assert_eq!(a_sign(0.0, 3.0, 1.0, 2.0), -1);
        assert_eq!(a_sign(0.0, 3.0, 2.0, 1.0), 0);
        assert_eq!(a_sign(3.0, 0.0, 1.0, 2.0), 0);
    }

    #[test]
    fn metric_kernel_examples() {
        assert_eq!(a_kernel_metric(&[1.0], &[2.0], &[3.0], &[4.0]).unwrap(), 1);
        let p = [0.5, -1.0, 2.0];
        assert_eq!(a_kernel_metric(&p, &p, &p, &p).unwrap(), 0);
        assert!(a_kernel_metric(&[1.0, 2.0], &[1.0], &[0.0, 0.0], &[0.0, 0.0]).is_err());
        assert!(a_kernel_metric(&[], &[], &[], &[]).is_err());
    }

    #[test]
    fn metric_kernel_on_counterexample_points() {
        // u1, u2 from the first block, u5, u6 from the second block of the R^8 construction.
        let u = |i: usize| -> Vec<f64> {
            (0..8)
                .map(|j| {
                    if i == j {
                        3.0
                    } else if (i < 4) == (j < 4) {
                        -1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        };
        let (u1, u2, u5, u6) = (u(0), u(1), u(4), u(5));
        assert!((euclidean(&u1, &u2) - 32f64.sqrt()).abs() < 1e-12);
        assert!((euclidean(&u1, &u5) - 24f64.sqrt()).abs() < 1e-12);
        assert_eq!(a_kernel_metric(&u1, &u2, &u5, &u6).unwrap(), -1);
    }

    #[test]
    fn metric_kernel_matches_real_kernel_in_one_dimension() {
        for code in 0..256u32 {
            let z: Vec<f64> = (0..4)
                .map(|k| ((code >> (2 * k)) & 3) as f64 * 0.7 - 1.1)
                .collect();
            let m = a_kernel_metric(&[z[0]], &[z[1]], &[z[2]], &[z[3]]).unwrap();
            assert_eq!(m, a_kernel(z[0], z[1], z[2], z[3]).unwrap(), "{z:?}");
        }
    }

    #[test]
    fn h_and_phi_examples() {
        assert_eq!(h_kernel(0.0, 1.0, 0.0, 1.0).unwrap(), 2.0);
        assert_eq!(h_kernel(0.3, 0.3, 0.3, 0.3).unwrap(), 0.0);
        assert_eq!(h_kernel(0.0, 1.0, 1.0, 0.0).unwrap(), 0.0);
        assert_eq!(phi_kernel(2.0, 1.0, 3.0).unwrap(), 1);
        assert_eq!(phi_kernel(1.0, 1.0, 1.0).unwrap(), 0);
        assert_eq!(phi_kernel(1.0, 2.0, 0.0).unwrap(), -1);
    }

    #[test]
    fn classify_examples() {
        let c = |p: [(f64, f64); 4]| classify_quadruple(&p).unwrap();
        assert_eq!(
            c([(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]),
            QuadrupleClass::Concordant
        );
        assert_eq!(
            c([(0.0, 0.0), (1.0, 2.0), (2.0, 1.0), (3.0, 3.0)]),
            QuadrupleClass::Discordant
        );
        assert_eq!(
            c([(0.0, 0.0), (0.0, 1.0), (0.0, 2.0), (1.0, 0.0)]),
            QuadrupleClass::Tied
        );
    }

    #[test]
    fn classification_agrees_with_kernel_products_on_tie_free_points() {
        // Every pair of permutations of 0..4 for x and y ranks.
        let perms: Vec<Vec<usize>> = itertools::Itertools::permutations(0..4usize, 4).collect();
        for px in &perms {
            for py in &perms {
                let pts: [(f64, f64); 4] = std::array::from_fn(|i| (px[i] as f64, py[i] as f64));
                let mut total = 0i32;
                for ord in &perms {
                    let ax = a_sign(pts[ord[0]].0, pts[ord[1]].0, pts[ord[2]].0, pts[ord[3]].0);
                    let ay = a_sign(pts[ord[0]].1, pts[ord[1]].1, pts[ord[2]].1, pts[ord[3]].1);
                    total += (ax * ay) as i32;
                }
                let expected = match classify_unchecked(&pts) {
                    QuadrupleClass::Concordant => 16,
                    QuadrupleClass::Discordant => -8,
                    QuadrupleClass::Tied => 0,
                };
                assert_eq!(total, expected, "{pts:?}");
                assert_ne!(classify_unchecked(&pts), QuadrupleClass::Tied);
            }
        }
    }
}

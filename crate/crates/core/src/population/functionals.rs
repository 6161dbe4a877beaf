//! `tau*` and the quadruple-class probabilities of finite joint laws.

use super::joint::{JointDistribution, Margin};
use crate::error::{Error, Result};
use crate::estimators::{guard_categories, metric_sign_tensor, sign_tensor, TableContraction};
use crate::kernels::{classify_unchecked, QuadrupleClass};

fn margin_tensor(margin: &Margin) -> Vec<f64> {
    match margin {
        Margin::Real(v) => sign_tensor(v),
        Margin::Metric { points, .. } => metric_sign_tensor(points),
    }
}

/// `tau* = E a(X1..X4) a(Y1..Y4)` for four iid draws, by contraction over
/// cell quadruples. Metric margins use the Euclidean `a` kernel.
pub fn pop_tau_star(joint: &JointDistribution) -> Result<f64> {
    guard_categories(joint.rows(), "joint rows")?;
    guard_categories(joint.cols(), "joint columns")?;
    let engine = TableContraction::new(
        joint.rows(),
        joint.cols(),
        margin_tensor(joint.row_values()),
        margin_tensor(joint.col_values()),
    );
    Ok(engine.evaluate(joint.probs()))
}

/// Probabilities that four iid draws form a concordant, discordant or tied
/// quadruple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrupleProbs {
    pub pi_c4: f64,
    pub pi_d4: f64,
    pub pi_tied: f64,
}

/// The three ordering probabilities behind `tau*`:
///
/// * `e1 = P(X1,X2 < X3,X4 and Y1,Y2 < Y3,Y4)`
/// * `e2 = P(X1,X2 < X3,X4 and Y1,Y2 > Y3,Y4)`
/// * `e3 = P(X1,X2 < X3,X4 and Y1,Y3 < Y2,Y4)`
///
/// where `A,B < C,D` means `max(A, B) < min(C, D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderProbs {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl OrderProbs {
    pub fn tau_star(&self) -> f64 {
        4.0 * (self.e1 + self.e2) - 8.0 * self.e3
    }

    /// Concordant quadruples split 2-2 in six ways, discordant ones in 24.
    pub fn quadruple_probs(&self) -> QuadrupleProbs {
        let pi_c4 = 6.0 * (self.e1 + self.e2);
        let pi_d4 = 24.0 * self.e3;
        QuadrupleProbs {
            pi_c4,
            pi_d4,
            pi_tied: 1.0 - pi_c4 - pi_d4,
        }
    }
}

/// Largest number of positive cells accepted by [`pop_order_probs`], whose
/// cost is cubic in that number.
pub const MAX_POSITIVE_CELLS: usize = 1600;

struct Atom {
    x: usize,
    y: usize,
    p: f64,
}

/// Cumulative mass `below[u][v] = P(X < x_u, Y < y_v)` on category indices,
/// with one extra row and column so that `u = r`, `v = c` mean "everything".
struct Cumulative {
    cols: usize,
    below: Vec<f64>,
}

impl Cumulative {
    fn new(joint: &JointDistribution) -> Self {
        let (r, c) = (joint.rows(), joint.cols());
        let w = c + 1;
        let mut below = vec![0.0; (r + 1) * w];
        for u in 1..=r {
            for v in 1..=c {
                below[u * w + v] =
                    joint.prob(u - 1, v - 1) + below[(u - 1) * w + v] + below[u * w + v - 1]
                        - below[(u - 1) * w + v - 1];
            }
        }
        Self { cols: c, below }
    }

    /// `P(X < x_u, Y < y_v)`.
    fn lower(&self, u: usize, v: usize) -> f64 {
        self.below[u * (self.cols + 1) + v]
    }

    /// `P(X < x_u, Y > y_v)`.
    fn lower_upper(&self, u: usize, v: usize) -> f64 {
        self.lower(u, self.cols) - self.lower(u, v + 1)
    }
}

/// Exact [`OrderProbs`] of a real-valued law in `O(m^3)` for `m` positive cells.
pub fn pop_order_probs(joint: &JointDistribution) -> Result<OrderProbs> {
    joint.real_values()?;
    let atoms: Vec<Atom> = (0..joint.rows())
        .flat_map(|x| (0..joint.cols()).map(move |y| (x, y)))
        .filter_map(|(x, y)| {
            let p = joint.prob(x, y);
            (p > 0.0).then_some(Atom { x, y, p })
        })
        .collect();
    if atoms.len() > MAX_POSITIVE_CELLS {
        return Err(Error::resource(format!(
            "{} positive cells exceed the limit of {MAX_POSITIVE_CELLS}",
            atoms.len()
        )));
    }
    let cum = Cumulative::new(joint);

    // Points 3 and 4 fixed; points 1 and 2 independently below them.
    let mut e1 = 0.0;
    let mut e2 = 0.0;
    for a in &atoms {
        for b in &atoms {
            let w = a.p * b.p;
            let u = a.x.min(b.x);
            let q1 = cum.lower(u, a.y.min(b.y));
            let q2 = cum.lower_upper(u, a.y.max(b.y));
            e1 += w * q1 * q1;
            e2 += w * q2 * q2;
        }
    }

    // Points 2 and 3 fixed with x2 < x3 and y3 < y2; point 4 above both in
    // the sense x4 > x2, y4 > y3; point 1 below min(x3, x4), min(y2, y4).
    let mut e3 = 0.0;
    for p2 in &atoms {
        for p3 in atoms.iter().filter(|p3| p2.x < p3.x && p3.y < p2.y) {
            let mut inner = 0.0;
            for p4 in atoms.iter().filter(|p4| p4.x > p2.x && p4.y > p3.y) {
                inner += p4.p * cum.lower(p3.x.min(p4.x), p2.y.min(p4.y));
            }
            e3 += p2.p * p3.p * inner;
        }
    }
    Ok(OrderProbs { e1, e2, e3 })
}

/// `tau*` from the ordering probabilities: `4 (e1 + e2) - 8 e3`.
pub fn pop_tau_star_from_probs(joint: &JointDistribution) -> Result<f64> {
    Ok(pop_order_probs(joint)?.tau_star())
}

/// Concordant / discordant / tied probabilities of four iid draws.
pub fn pop_quadruple_probs(joint: &JointDistribution) -> Result<QuadrupleProbs> {
    Ok(pop_order_probs(joint)?.quadruple_probs())
}

/// Largest number of positive cells accepted by
/// [`pop_quadruple_probs_enumerated`].
pub const MAX_ENUMERATED_CELLS: usize = 64;

/// Quadruple-class probabilities by classifying every cell quadruple.
pub fn pop_quadruple_probs_enumerated(joint: &JointDistribution) -> Result<QuadrupleProbs> {
    let (xv, yv) = joint.real_values()?;
    let atoms: Vec<((f64, f64), f64)> = (0..joint.rows())
        .flat_map(|i| (0..joint.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| joint.prob(i, j) > 0.0)
        .map(|(i, j)| ((xv[i], yv[j]), joint.prob(i, j)))
        .collect();
    if atoms.len() > MAX_ENUMERATED_CELLS {
        return Err(Error::resource(format!(
            "{} positive cells exceed the enumeration limit of {MAX_ENUMERATED_CELLS}",
            atoms.len()
        )));
    }
    let (mut c, mut d, mut t) = (0.0, 0.0, 0.0);
    for a in &atoms {
        for b in &atoms {
            for e in &atoms {
                for f in &atoms {
                    let w = a.1 * b.1 * e.1 * f.1;
                    match classify_unchecked(&[a.0, b.0, e.0, f.0]) {
                        QuadrupleClass::Concordant => c += w,
                        QuadrupleClass::Discordant => d += w,
                        QuadrupleClass::Tied => t += w,
                    }
                }
            }
        }
    }
    Ok(QuadrupleProbs {
        pi_c4: c,
        pi_d4: d,
        pi_tied: t,
    })
}

/// `P(max(A1, A2) < min(B1, B2))` for independent `A ~ a`, `B ~ b` on the
/// same ordered support.
fn pair_below_pair(a: &[f64], b: &[f64]) -> f64 {
    let mut below_a = 0.0;
    let mut above_b: f64 = b.iter().sum();
    let mut total = 0.0;
    for (&pa, &pb) in a.iter().zip(b) {
        above_b -= pb;
        let at_most = below_a + pa;
        // P(max(A1, A2) equals this category) * P(both B exceed it)
        total += (at_most * at_most - below_a * below_a) * above_b * above_b;
        below_a = at_most;
    }
    total
}

/// `P(max(A1, B1) < min(A2, B2))` for independent `A ~ a`, `B ~ b`.
fn mixed_pair_below_pair(a: &[f64], b: &[f64]) -> f64 {
    let (mut fa, mut fb) = (0.0, 0.0);
    let mut sa: f64 = a.iter().sum();
    let mut sb: f64 = b.iter().sum();
    let mut total = 0.0;
    for (&pa, &pb) in a.iter().zip(b) {
        sa -= pa;
        sb -= pb;
        let (na, nb) = (fa + pa, fb + pb);
        total += (na * nb - fa * fb) * sa * sb;
        fa = na;
        fb = nb;
    }
    total
}

/// `tau*` of a law with two rows through the conditional laws `U`, `V` of
/// `Y` given each row:
/// `4 p^2 (1-p)^2 [P(U,U < V,V) + P(V,V < U,U) - 2 P(U,V < U,V)]`.
pub fn pop_tau_star_binary(joint: &JointDistribution) -> Result<f64> {
    if joint.rows() != 2 {
        return Err(Error::invalid(format!(
            "binary reduction needs exactly 2 rows, got {}",
            joint.rows()
        )));
    }
    if !joint.row_values().is_real() {
        return Err(Error::invalid("binary reduction needs real row values"));
    }
    if !joint.col_values().is_real() {
        return Err(Error::Unsupported(
            "binary reduction needs real column values".into(),
        ));
    }
    let probs = joint.row_probs();
    let p = probs[0];
    if p <= 0.0 || probs[1] <= 0.0 {
        return Ok(0.0);
    }
    let u: Vec<f64> = (0..joint.cols())
        .map(|j| joint.prob(0, j) / probs[0])
        .collect();
    let v: Vec<f64> = (0..joint.cols())
        .map(|j| joint.prob(1, j) / probs[1])
        .collect();
    let q = probs[1];
    let bracket =
        pair_below_pair(&u, &v) + pair_below_pair(&v, &u) - 2.0 * mixed_pair_below_pair(&u, &v);
    Ok(4.0 * p * p * q * q * bracket)
}

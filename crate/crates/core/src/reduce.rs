//! Gauge transformations and the reduction of a connection with a regular
//! leading stratum to its formal type.
//!
//! The reduction runs in sheared coordinates `M^ = z^x M z^{-x}`, where the
//! grade at `x` of a term is simply its exponent. There the gauge action
//! `M -> Ad(g)(M - x) - tau(g) g^{-1} + x` keeps the familiar form, a
//! homogeneous `X^ = X_c z^l` has `tau(exp X^) exp(-X^) = l X^`, and a
//! truncation below a grade is preserved by every step.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::apartment::{
    self, grade_pattern, homogeneous_coefficients, homogeneous_from_coefficients, residue_classes, theta_lift, Point,
};
use crate::error::{Error, Result};
use crate::formaltype::FormalType;
use crate::scalars::linalg::Dense;
use crate::scalars::{qi, Cyclotomic, LoopMatrix, PuiseuxSeries, Q};
use crate::strata::{depth_zero_eigenvalues, is_regular_stratum, leading_stratum, resonant_root, Connection, Stratum};
use crate::torus::{gauge_matrix, is_graded_compatible, non_cartan_part, pi_s, TorusData};

/// How a gauge element was built; informational only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Constant(Dense),
    /// `z^mu` on the diagonal.
    Shear(Vec<i64>),
    /// `exp(X)` for a positive-grade or nilpotent `X`.
    Exp(LoopMatrix),
    /// Lift of a constant element of the reductive quotient at a point.
    Lift(Dense),
    /// A matrix given directly.
    Matrix,
}

/// An invertible loop matrix with its inverse.
#[derive(Clone, Debug)]
pub struct GaugeElement {
    matrix: LoopMatrix,
    inverse: LoopMatrix,
    factors: Vec<Factor>,
}

impl GaugeElement {
    pub fn identity(n: usize) -> Self {
        GaugeElement { matrix: LoopMatrix::identity(n), inverse: LoopMatrix::identity(n), factors: Vec::new() }
    }

    /// Wraps a matrix and a known inverse.
    pub fn from_parts(matrix: LoopMatrix, inverse: LoopMatrix) -> Self {
        GaugeElement { matrix, inverse, factors: vec![Factor::Matrix] }
    }

    /// Inverts `matrix` (which must have an invertible determinant).
    pub fn from_matrix(matrix: LoopMatrix) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Ok(Self::from_parts(matrix, inverse))
    }

    pub fn constant(h: &Dense) -> Result<Self> {
        let inv = h.inverse().ok_or_else(|| Error::NotInvertible(String::from("singular constant matrix")))?;
        Ok(GaugeElement {
            matrix: LoopMatrix::constant(h.rows, &h.data),
            inverse: LoopMatrix::constant(h.rows, &inv.data),
            factors: vec![Factor::Constant(h.clone())],
        })
    }

    /// `z^mu`.
    pub fn shear(mu: &[i64]) -> Self {
        let m: Vec<Q> = mu.iter().map(|v| qi(*v)).collect();
        let m_inv: Vec<Q> = mu.iter().map(|v| qi(-*v)).collect();
        GaugeElement {
            matrix: LoopMatrix::z_power(&m),
            inverse: LoopMatrix::z_power(&m_inv),
            factors: vec![Factor::Shear(mu.to_vec())],
        }
    }

    /// `exp(X)` for `X` homogeneous of positive grade `g` at `x`, truncated
    /// below the exponent `prec`.
    pub fn exp(x_mat: &LoopMatrix, g: &Q, x: &Point, prec: &Q) -> Self {
        GaugeElement {
            matrix: apartment::exp_homogeneous(x_mat, g, x, prec),
            inverse: apartment::exp_homogeneous(&x_mat.scale_q(&qi(-1)), g, x, prec),
            factors: vec![Factor::Exp(x_mat.clone())],
        }
    }

    /// Lift of a constant element of the reductive quotient at `x`.
    pub fn lift(h: &Dense, x: &Point) -> Result<Self> {
        let inv = h.inverse().ok_or_else(|| Error::NotInvertible(String::from("singular constant matrix")))?;
        Ok(GaugeElement {
            matrix: theta_lift(h, x)?,
            inverse: theta_lift(&inv, x)?,
            factors: vec![Factor::Lift(h.clone())],
        })
    }

    pub fn matrix(&self) -> &LoopMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &LoopMatrix {
        &self.inverse
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// The product `self * other`.
    pub fn compose(&self, other: &GaugeElement) -> GaugeElement {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        GaugeElement {
            matrix: &self.matrix * &other.matrix,
            inverse: &other.inverse * &self.inverse,
            factors,
        }
    }

    pub fn invert(&self) -> GaugeElement {
        GaugeElement { matrix: self.inverse.clone(), inverse: self.matrix.clone(), factors: vec![Factor::Matrix] }
    }
}

/// `M -> g M g^{-1} - tau(g) g^{-1}`.
pub fn gauge(g: &GaugeElement, c: &Connection) -> Connection {
    Connection::new(gauge_matrix(&g.matrix, &g.inverse, c.matrix()))
}

/// Solves `[X, beta0] = Y - pi_s(Y)` for `X` homogeneous of grade `l` at the
/// stratum's point, where `Y` is homogeneous of grade `l - r`. Among the
/// solutions the one orthogonal to the Cartan (`pi_s(X) = 0`) is returned.
pub fn kernel_solve(st: &Stratum, torus: &TorusData, y: &LoopMatrix, l: &Q) -> Result<LoopMatrix> {
    let x = st.x();
    let n = x.n();
    let target = non_cartan_part(torus, y)?;
    if target.is_zero_to_precision() {
        return Ok(LoopMatrix::zeros(n, 1, crate::scalars::Precision::Exact));
    }
    let yc = homogeneous_coefficients(&target);
    let b = st.leading_coefficients();
    let pattern = grade_pattern(x, l);
    let sys = commutator_system(&b, &pattern, None);
    let sol = sys.solve(&yc.data).ok_or_else(|| {
        Error::NoSolution(alloc::format!("[X, beta0] = Y at grade {} has no solution", l - st.r()))
    })?;
    let xc = from_pattern(n, &pattern, &sol);
    let xm = homogeneous_from_coefficients(&xc, x, l);
    let cartan = pi_s(torus, &xm)?.to_matrix(torus);
    Ok(&xm - &cartan)
}

/// Matrix of `X_c -> X_c B - B X_c - shift X_c` on the entries allowed by `pattern`,
/// with rows indexed by the `n^2` entries of the result.
fn commutator_system(b: &Dense, pattern: &[(usize, usize)], shift: Option<&Q>) -> Dense {
    let n = b.rows;
    let mut sys = Dense::zeros(n * n, pattern.len());
    for (col, &(a, c)) in pattern.iter().enumerate() {
        for j in 0..n {
            let v = sys.get(a * n + j, col) + b.get(c, j);
            sys.set(a * n + j, col, v);
        }
        for i in 0..n {
            let v = sys.get(i * n + c, col) - b.get(i, a);
            sys.set(i * n + c, col, v);
        }
        if let Some(s) = shift {
            let v = sys.get(a * n + c, col) - &Cyclotomic::from_q(s.clone());
            sys.set(a * n + c, col, v);
        }
    }
    sys
}

fn from_pattern(n: usize, pattern: &[(usize, usize)], v: &[Cyclotomic]) -> Dense {
    let mut out = Dense::zeros(n, n);
    for (k, &(a, c)) in pattern.iter().enumerate() {
        out.set(a, c, v[k].clone());
    }
    out
}

/// Conjugates a regular depth-zero stratum so that its leading term is a
/// constant diagonal matrix, using a lifted element of the reductive quotient.
pub fn diagonalize_depth_zero(st: &Stratum) -> Result<(GaugeElement, Stratum)> {
    if !st.r().is_zero() {
        return Err(Error::Invalid(String::from("diagonalization applies to depth-zero strata")));
    }
    let x = st.x();
    let n = x.n();
    let b = st.leading_coefficients();
    let eig = depth_zero_eigenvalues(st)?;
    for i in 0..n {
        for j in 0..i {
            if eig[i] == eig[j] {
                return Err(Error::NotRegular(String::from("depth-zero leading term has a repeated eigenvalue")));
            }
        }
    }
    let diag = Dense::from_rows(
        n,
        n,
        (0..n * n)
            .map(|k| if k / n == k % n { Cyclotomic::from_q(eig[k / n].clone()) } else { Cyclotomic::zero() })
            .collect(),
    );
    let target = Stratum::new(x.clone(), Q::zero(), homogeneous_from_coefficients(&diag, x, &Q::zero()))?;
    if b.is_diagonal() {
        return Ok((GaugeElement::identity(n), target));
    }
    let mut cmat = Dense::zeros(n, n);
    for (_, idx) in residue_classes(x) {
        let k = idx.len();
        let mut block = Dense::zeros(k, k);
        for (a, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                block.set(a, c, b.get(i, j).clone());
            }
        }
        for &slot in &idx {
            let shifted = block.sub(&Dense::identity(k).scale(&Cyclotomic::from_q(eig[slot].clone())));
            let v = shifted.nullspace().into_iter().next().expect("eigenvalue has an eigenvector");
            for (a, &i) in idx.iter().enumerate() {
                cmat.set(i, slot, v[a].clone());
            }
        }
    }
    let c_inv = cmat.inverse().ok_or_else(|| Error::NotRegular(String::from("leading term is not diagonalizable")))?;
    let m = GaugeElement::lift(&c_inv, x)?;
    Ok((m, target))
}

/// Output of [`reduce_to_formal_type`].
#[derive(Clone, Debug)]
pub struct ReductionResult {
    /// Gauge element with `gauge(p, C) = A~` below `certified_below`.
    pub p: GaugeElement,
    pub formal_type: FormalType,
    /// The reduced matrix `A~`, exact and in the Cartan.
    pub reduced: LoopMatrix,
    /// `gauge(p, C) - A~`; it vanishes to its precision.
    pub certificate: LoopMatrix,
    /// Every grade below this is certified: the requested bound, or less when
    /// the input is not known far enough.
    pub certified_below: Q,
    pub point: Point,
}

/// Gauges `c`, which must contain a stratum at `x` regular for `torus` with
/// leading term in its Cartan, into the Cartan at all grades below `bound`.
/// Grades in `[-r, 0]` form the formal type; higher grades are removed.
///
/// Depth zero requires the split torus; the leading term is diagonalized
/// first and the remaining off-diagonal terms are removed root by root, which
/// needs nonresonance.
pub fn reduce_to_formal_type(c: &Connection, torus: &TorusData, x: Option<&Point>, bound: &Q) -> Result<ReductionResult> {
    let n = c.n();
    if torus.n() != n {
        return Err(Error::Mismatch(alloc::format!("torus {torus} does not fit a rank {n} connection")));
    }
    if c.matrix().ram() != 1 {
        return Err(Error::Invalid(String::from("reduction needs a connection over F")));
    }
    let x = x.cloned().unwrap_or_else(|| torus.base_point());
    if !is_graded_compatible(&x, torus, None)? {
        return Err(Error::NotCompatible(alloc::format!("{x} is not graded compatible with {torus}")));
    }
    let st0 = leading_stratum(c, &x)?;
    let r = st0.r().clone();
    let (p0, st) = if r.is_zero() {
        if !torus.is_split() {
            return Err(Error::NotRegular(String::from("depth-zero strata reduce only for the split torus")));
        }
        if let Some((i, j)) = resonant_root(&st0)? {
            return Err(Error::Resonant(alloc::format!("root e_{} - e_{} at {x}", i + 1, j + 1)));
        }
        if is_regular_stratum(&st0)?.is_none() {
            return Err(Error::NotRegular(String::from("depth-zero leading term is not regular semisimple")));
        }
        diagonalize_depth_zero(&st0)?
    } else {
        if is_regular_stratum(&st0)?.is_none() {
            return Err(Error::NotRegular(alloc::format!("leading term of depth {r} at {x} is not regular")));
        }
        if !non_cartan_part(torus, st0.beta0())?.is_zero_to_precision() {
            return Err(Error::NotRegular(alloc::format!("leading term is not in the Cartan of {torus}")));
        }
        (GaugeElement::identity(n), st0)
    };
    let start = gauge(&p0, c);

    let xs = x.coords().to_vec();
    let neg_xs: Vec<Q> = xs.iter().map(|v| -v.clone()).collect();
    let xm = x.matrix();
    let mut mh = start.matrix().shear(&xs);
    // unshearing p and multiplying by c cost up to four spreads of precision
    let working = bound + &x.spread() * qi(4);
    let target = match mh.prec_q() {
        Some(k) if k < working => k,
        _ => working,
    };
    if target <= Q::zero() {
        return Err(Error::InsufficientPrecision(alloc::format!(
            "connection is known below grade {target} at {x}; the formal type needs grade 0"
        )));
    }
    mh = mh.truncate_q(&target);
    let gauge_prec = &target + &r;
    let mut ph = LoopMatrix::identity(n).truncate_q(&gauge_prec);
    let mut ph_inv = ph.clone();
    let depth_zero_residue = if r.is_zero() { Some(st.leading_coefficients()) } else { None };

    // At positive grades the Cartan correction exp(Z/j) also contributes
    // -ad(x)(Z/j) outside the Cartan, so the kernel step runs a second time.
    for j in apartment::critical_grades(&x, &-r.clone(), &target, false) {
        let l = &j + &r;
        for pass in 0..2 {
            let yc = exponent_coefficients(&mh, &j);
            if yc.is_zero() {
                break;
            }
            let y = homogeneous_from_coefficients(&yc, &x, &j);
            let off = non_cartan_part(torus, &y)?;
            if !off.is_zero_to_precision() {
                // generator G with gauge exp(G) removing the non-Cartan part
                let gc = match &depth_zero_residue {
                    None => homogeneous_coefficients(&kernel_solve(&st, torus, &y, &l)?).scale(&Cyclotomic::from_i64(-1)),
                    Some(b) => {
                        let pattern = grade_pattern(&x, &l);
                        let sys = commutator_system(b, &pattern, Some(&l));
                        let rhs = homogeneous_coefficients(&off).scale(&Cyclotomic::from_i64(-1));
                        let sol = sys.solve(&rhs.data).ok_or_else(|| {
                            Error::Resonant(alloc::format!("no gauge removes grade {j} at {x}"))
                        })?;
                        from_pattern(n, &pattern, &sol)
                    }
                };
                apply_exp(&mut mh, &mut ph, &mut ph_inv, &gc, &l, &xm, &target, &gauge_prec);
            }
            if pass == 1 || j <= Q::zero() {
                break;
            }
            let cartan = cartan_coefficients(torus, &exponent_coefficients(&mh, &j), &x, &j)?;
            if cartan.is_zero() {
                break;
            }
            let gc = cartan.scale(&Cyclotomic::from_q(j.recip()));
            apply_exp(&mut mh, &mut ph, &mut ph_inv, &gc, &j, &xm, &target, &gauge_prec);
        }
    }

    // A~ is the part of grade <= 0; everything else must have been removed
    let reduced_hat = LoopMatrix::from_fn(n, |i, k| {
        let s = mh.get(i, k);
        let terms: Vec<(i64, Cyclotomic)> =
            s.terms().iter().filter(|(e, _)| **e <= 0).map(|(e, c)| (*e, c.clone())).collect();
        PuiseuxSeries::from_terms(s.ram(), crate::scalars::Precision::Exact, terms)
    });
    let reduced = reduced_hat.shear(&neg_xs);
    if !non_cartan_part(torus, &reduced)?.is_zero_to_precision() {
        return Err(Error::NoSolution(String::from("reduced matrix left the Cartan")));
    }

    let start_hat = start.matrix().shear(&xs).truncate_q(&target);
    let sheared = &sheared_gauge(&ph, &ph_inv, &start_hat, &xm).truncate_q(&target) - &reduced_hat;
    if !sheared.is_zero_to_precision() {
        return Err(Error::NoSolution(String::from("reduction certificate does not vanish")));
    }

    let p_body = GaugeElement { matrix: ph.shear(&neg_xs), inverse: ph_inv.shear(&neg_xs), factors: vec![Factor::Matrix] };
    let p = p_body.compose(&p0);
    let certificate = gauge(&p, c).matrix() - &reduced;
    if !certificate.is_zero_to_precision() {
        return Err(Error::NoSolution(String::from("reduction certificate does not vanish")));
    }
    let certified_below = match apartment::known_grade(&certificate, &x) {
        Some(k) if &k < bound => k,
        _ => bound.clone(),
    };
    let formal_type = FormalType::from_cartan(torus.clone(), r, &pi_s(torus, &reduced)?)?;
    Ok(ReductionResult { p, formal_type, reduced, certificate, certified_below, point: x })
}

/// Constant coefficient matrix of the `z^j` terms.
fn exponent_coefficients(m: &LoopMatrix, j: &Q) -> Dense {
    let n = m.n();
    let mut out = Dense::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let s = m.get(i, k);
            let key = j * Q::from_integer((s.ram() as i64).into());
            if crate::scalars::is_integer(&key) {
                if let Some(c) = s.terms().get(&crate::scalars::to_i64(&key).unwrap()) {
                    out.set(i, k, c.clone());
                }
            }
        }
    }
    out
}

/// Sheared coefficients of the Cartan part of the grade-`j` component with sheared coefficients `yc`.
fn cartan_coefficients(torus: &TorusData, yc: &Dense, x: &Point, j: &Q) -> Result<Dense> {
    if yc.is_zero() {
        return Ok(yc.clone());
    }
    let y = homogeneous_from_coefficients(yc, x, j);
    let cartan = pi_s(torus, &y)?.to_matrix(torus);
    Ok(homogeneous_coefficients(&cartan.shear(x.coords())))
}

/// `exp(G_c z^l)` in sheared coordinates, truncated below `prec`.
fn exp_sheared(gc: &Dense, l: &Q, prec: &Q) -> LoopMatrix {
    let n = gc.rows;
    let mut acc = LoopMatrix::identity(n);
    let mut power = Dense::identity(n);
    let mut k: i64 = 1;
    while &(qi(k) * l) < prec {
        power = power.mul(gc).scale(&Cyclotomic::from_q(crate::scalars::q(1, k)));
        if power.is_zero() {
            break;
        }
        acc = &acc + &LoopMatrix::constant(n, &power.data).shift_q(&(qi(k) * l));
        k += 1;
    }
    acc.truncate_q(prec)
}

/// `Ad(g)(M - x) - tau(g) g^{-1} + x` in sheared coordinates.
fn sheared_gauge(g: &LoopMatrix, g_inv: &LoopMatrix, m: &LoopMatrix, xm: &LoopMatrix) -> LoopMatrix {
    let w = m - xm;
    &(&(&(g * &w) * g_inv) - &(&g.tau() * g_inv)) + xm
}

#[allow(clippy::too_many_arguments)]
fn apply_exp(
    mh: &mut LoopMatrix,
    ph: &mut LoopMatrix,
    ph_inv: &mut LoopMatrix,
    gc: &Dense,
    l: &Q,
    xm: &LoopMatrix,
    target: &Q,
    gauge_prec: &Q,
) {
    let g = exp_sheared(gc, l, gauge_prec);
    let g_inv = exp_sheared(&gc.scale(&Cyclotomic::from_i64(-1)), l, gauge_prec);
    *mh = sheared_gauge(&g, &g_inv, mh, xm).truncate_q(target);
    *ph = (&g * &*ph).truncate_q(gauge_prec);
    *ph_inv = (&*ph_inv * &g_inv).truncate_q(gauge_prec);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{q, Precision};
    use crate::torus::WeylClass;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_i64(n)
    }

    fn el(n: usize, i: usize, j: usize, v: i64, k: i64) -> LoopMatrix {
        LoopMatrix::elementary(n, i, j, c(v), k, 1)
    }

    fn coxeter2() -> TorusData {
        TorusData::standard(&WeylClass::new(vec![2]))
    }

    #[test]
    fn gauge_examples() {
        let m = Connection::new(LoopMatrix::zeros(2, 1, Precision::Exact));
        let g = GaugeElement::shear(&[1, 0]);
        assert_eq!(gauge(&g, &m).matrix(), &LoopMatrix::diagonal_q(&[qi(-1), qi(0)]));
        let id = GaugeElement::identity(2);
        let w = Connection::new(el(2, 0, 1, 3, -1));
        assert_eq!(gauge(&id, &w), w);
    }

    #[test]
    fn kernel_solve_on_the_coxeter_torus() {
        let t = coxeter2();
        let x = t.base_point();
        let w_inv = t.block_power(0, -1);
        let st = Stratum::new(x.clone(), q(1, 2), w_inv.clone()).unwrap();
        // Y = E11 - I/2 has grade 0 = l - r with l = 1/2
        let y = &el(2, 0, 0, 1, 0) - &LoopMatrix::identity(2).scale_q(&q(1, 2));
        let sol = kernel_solve(&st, &t, &y, &q(1, 2)).unwrap();
        assert_eq!(sol.commutator(&w_inv), y);
        assert!(pi_s(&t, &sol).unwrap().is_zero());
        // a Cartan element needs no correction
        assert!(kernel_solve(&st, &t, &LoopMatrix::identity(2), &q(1, 2)).unwrap().is_zero_to_precision());
    }

    #[test]
    fn already_reduced_connection_needs_no_gauge() {
        let t = coxeter2();
        let res = reduce_to_formal_type(&Connection::new(t.block_power(0, -1)), &t, None, &qi(2)).unwrap();
        assert!((res.p.matrix() - &LoopMatrix::identity(2)).is_zero_to_precision());
        assert_eq!(res.reduced, t.block_power(0, -1));
    }

    #[test]
    fn reduction_removes_a_diagonal_perturbation() {
        let t = coxeter2();
        let conn = Connection::new(&t.block_power(0, -1) + &el(2, 0, 0, 1, 0));
        let res = reduce_to_formal_type(&conn, &t, None, &qi(2)).unwrap();
        assert!(res.certified_below >= qi(1));
        // the residue keeps the trace: tr(E11)/2 = 1/2 on the identity
        let expected = &t.block_power(0, -1) + &LoopMatrix::identity(2).scale_q(&q(1, 2));
        assert_eq!(res.reduced, expected);
        let direct = gauge(&res.p, &conn);
        let diff = direct.matrix() - &res.reduced;
        assert!(diff.is_zero_to_precision());
        assert!(apartment::known_grade(&diff, &res.point).unwrap() >= q(1, 2));
    }

    #[test]
    fn split_reduction_and_resonance() {
        let t = TorusData::split(2);
        let d = LoopMatrix::diagonal(&[c(1), c(2)]).shift_q(&qi(-1));
        let conn = Connection::new(&d + &el(2, 0, 1, 1, 0));
        let res = reduce_to_formal_type(&conn, &t, None, &qi(3)).unwrap();
        assert_eq!(res.reduced, d);

        let resonant = Connection::new(&LoopMatrix::diagonal(&[c(1), c(0)]) + &el(2, 0, 1, 1, 1));
        assert!(matches!(reduce_to_formal_type(&resonant, &t, None, &qi(3)), Err(Error::Resonant(_))));
        let fine = Connection::new(&LoopMatrix::diagonal_q(&[q(1, 3), qi(0)]) + &el(2, 0, 1, 1, 1));
        let res = reduce_to_formal_type(&fine, &t, None, &qi(3)).unwrap();
        assert_eq!(res.reduced, LoopMatrix::diagonal_q(&[q(1, 3), qi(0)]));
    }

    #[test]
    fn depth_zero_diagonalization() {
        let x = Point::origin(2);
        // C diag(1/2, 0) C^{-1} with C = [[1,1],[0,1]]
        let b = LoopMatrix::constant(2, &[Cyclotomic::from_q(q(1, 2)), Cyclotomic::from_q(q(-1, 2)), c(0), c(0)]);
        let st = Stratum::new(x, qi(0), b.clone()).unwrap();
        let (m, st2) = diagonalize_depth_zero(&st).unwrap();
        assert!(st2.leading_coefficients().is_diagonal());
        assert_eq!(&(m.matrix() * &b) * m.inverse(), *st2.beta0());
        let nil = Stratum::new(Point::origin(2), qi(0), el(2, 0, 1, 1, 0)).unwrap();
        assert!(diagonalize_depth_zero(&nil).is_err());
    }

    #[test]
    fn nilpotent_leading_term_is_rejected() {
        let t = TorusData::split(2);
        let conn = Connection::new(el(2, 0, 1, 1, -1));
        assert!(matches!(reduce_to_formal_type(&conn, &t, None, &qi(2)), Err(Error::NotRegular(_))));
    }
}

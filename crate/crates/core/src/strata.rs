//! Strata contained in a connection: leading terms, fundamentality, the
//! slope, and the regularity and resonance tests.
//!
//! A stratum `(x, r, beta0)` is contained in `d + M dz/z` when `M - x` lies in
//! the filtration piece of grades `>= -r` at `x` and its grade `-r` component
//! is `beta0`. Working with the coefficient matrix `B` of `beta0` (the
//! constant matrix obtained by shearing with `z^x` and multiplying by `z^r`)
//! turns most questions into finite linear algebra: `beta0` is nilpotent iff
//! `B` is, and its centralizer over one period has the dimension of the
//! centralizer of `B` in `gl_n(k)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::apartment::{
    self, grade_pattern, homogeneous_coefficients, homogeneous_from_coefficients, mp_decompose, residue_classes,
    theta_lift, Point,
};
use crate::error::{Error, Result};
use crate::scalars::linalg::Dense;
use crate::scalars::{frac, is_integer, q, qi, Cyclotomic, LoopMatrix, Q};
use crate::torus::{gauge_matrix, non_cartan_part, TorusData, WeylClass};

/// The connection `d + M dz/z`, stored as `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    matrix: LoopMatrix,
}

impl Connection {
    pub fn new(matrix: LoopMatrix) -> Self {
        Connection { matrix }
    }

    pub fn matrix(&self) -> &LoopMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// The connection in the trivialization changed by `g`.
    pub fn gauge(&self, g: &LoopMatrix, g_inv: &LoopMatrix) -> Connection {
        Connection { matrix: gauge_matrix(g, g_inv, &self.matrix) }
    }
}

/// A stratum with its homogeneous leading term `beta0` of grade `-r` at `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    x: Point,
    r: Q,
    beta0: LoopMatrix,
}

impl Stratum {
    pub fn new(x: Point, r: Q, beta0: LoopMatrix) -> Result<Self> {
        if r < Q::zero() {
            return Err(Error::Invalid(alloc::format!("negative depth {r}")));
        }
        if beta0.n() != x.n() {
            return Err(Error::Invalid(String::from("size of the leading term and the point differ")));
        }
        let g = mp_decompose(&beta0, &x);
        if g.known_below.is_some() && !beta0.is_zero_to_precision() {
            return Err(Error::Invalid(String::from("leading term must be exact")));
        }
        if g.components.keys().any(|k| k != &-r.clone()) {
            return Err(Error::Invalid(alloc::format!("leading term is not homogeneous of grade {}", -r.clone())));
        }
        Ok(Stratum { x, r, beta0 })
    }

    pub fn x(&self) -> &Point {
        &self.x
    }

    pub fn r(&self) -> &Q {
        &self.r
    }

    pub fn beta0(&self) -> &LoopMatrix {
        &self.beta0
    }

    /// The constant matrix `B` with `beta0 = z^{-x} B z^{x} z^{-r}`.
    pub fn leading_coefficients(&self) -> Dense {
        homogeneous_coefficients(&self.beta0)
    }
}

/// The stratum at `x` of least depth contained in `c` in the given
/// trivialization: `r = max(0, -depth(M - x))`.
pub fn leading_stratum(c: &Connection, x: &Point) -> Result<Stratum> {
    let d = c.matrix() - &x.matrix();
    let g = mp_decompose(&d, x);
    if let Some(k) = &g.known_below {
        if k <= &Q::zero() {
            return Err(Error::precision("leading stratum", &Q::zero(), k));
        }
    }
    let r = match g.depth() {
        Some(dep) if dep < Q::zero() => -dep,
        _ => Q::zero(),
    };
    let beta0 = g.component(&-r.clone())?;
    Ok(Stratum { x: x.clone(), r, beta0 })
}

/// A stratum is fundamental when its leading term is not nilpotent.
pub fn is_fundamental(st: &Stratum) -> bool {
    !st.leading_coefficients().is_nilpotent()
}

/// Whether `c` contains `st` in the given trivialization.
pub fn contains_stratum(c: &Connection, st: &Stratum) -> Result<bool> {
    let d = c.matrix() - &st.x.matrix();
    let minus_r = -st.r.clone();
    if !apartment::in_filtration(&d, &st.x, &minus_r)? {
        return Ok(false);
    }
    Ok(apartment::component(&d, &st.x, &minus_r)? == st.beta0)
}

/// Points with first coordinate `0` and all coordinates in `{0, 1/e, ..., (e-1)/e}`
/// for some `e <= n`. Every vertex of the standard alcove (and every barycenter
/// of a lattice chain of period at most `n`) is an affine Weyl translate of one
/// of these.
pub fn candidate_points(n: usize) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for e in 1..=n as i64 {
        let total = (e as usize).pow(n.saturating_sub(1) as u32);
        for mut idx in 0..total {
            let mut coords = vec![Q::zero()];
            for _ in 1..n {
                coords.push(q((idx % e as usize) as i64, e));
                idx /= e as usize;
            }
            out.push(Point::new(coords));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Valuation data for the apartment optimization: for every entry, the
/// valuation of a known nonzero entry, or the precision of an entry that
/// vanishes to its precision.
struct Valuations {
    n: usize,
    known: Vec<Option<Q>>,
    unknown: Vec<Option<Q>>,
}

impl Valuations {
    fn of(m: &LoopMatrix) -> Self {
        let n = m.n();
        let mut known = vec![None; n * n];
        let mut unknown = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                let s = m.get(i, j);
                match (s.leading_key(), s.prec_q()) {
                    (Some(k), _) => known[i * n + j] = Some(q(k, s.ram() as i64)),
                    (None, Some(p)) => unknown[i * n + j] = Some(p),
                    (None, None) => {}
                }
            }
        }
        Valuations { n, known, unknown }
    }
}

/// Largest mean of `w` over directed cycles (self-loops included), by Karp's
/// recursion over walks of each length. `None` for an acyclic graph.
fn max_cycle_mean(n: usize, w: &[Option<Q>]) -> Option<Q> {
    // walks[k][v]: largest weight of a walk with k edges ending at v
    let mut walks: Vec<Vec<Option<Q>>> = vec![vec![Some(Q::zero()); n]];
    for k in 1..=n {
        let mut row = vec![None; n];
        for v in 0..n {
            for u in 0..n {
                if let (Some(a), Some(b)) = (&walks[k - 1][u], &w[u * n + v]) {
                    let cand = a + b;
                    if row[v].as_ref().is_none_or(|cur: &Q| &cand > cur) {
                        row[v] = Some(cand);
                    }
                }
            }
        }
        walks.push(row);
    }
    let mut best: Option<Q> = None;
    for v in 0..n {
        let Some(top) = &walks[n][v] else { continue };
        let mut worst: Option<Q> = None;
        for k in 0..n {
            if let Some(dk) = &walks[k][v] {
                let mean = (top - dk) / qi((n - k) as i64);
                if worst.as_ref().is_none_or(|cur| &mean < cur) {
                    worst = Some(mean);
                }
            }
        }
        if let Some(m) = worst {
            if best.as_ref().is_none_or(|cur| &m > cur) {
                best = Some(m);
            }
        }
    }
    best
}

/// Shortest distances from a virtual source joined to every vertex by a
/// zero edge. The caller guarantees there is no negative cycle.
fn bellman_ford(n: usize, w: &[Option<Q>]) -> Vec<Q> {
    let mut dist: Vec<Q> = vec![Q::zero(); n];
    for _ in 0..n {
        let mut changed = false;
        for u in 0..n {
            for v in 0..n {
                if let Some(c) = &w[u * n + v] {
                    let cand = &dist[u] + c;
                    if cand < dist[v] {
                        dist[v] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// A point of the standard apartment minimizing the depth of the leading
/// stratum of `d + M dz/z` in the given trivialization, with that depth.
///
/// The depth at `x` is `max(0, max (x_j - x_i - v_ij))` over nonzero entries,
/// a convex piecewise-linear function whose minimum is the largest cycle mean
/// of `-v`. The optimal points are the solutions of the difference constraints
/// `x_j <= x_i + v_ij + r`. Entries that vanish to their precision `N` are
/// kept strictly above grade `-r` so the leading stratum is determined.
pub fn optimal_point(m: &LoopMatrix) -> Result<(Point, Q)> {
    let val = Valuations::of(m);
    let n = val.n;
    let neg = |v: &Option<Q>| v.as_ref().map(|x| -x.clone());
    let w_known: Vec<Option<Q>> = val.known.iter().map(neg).collect();
    let r = max_cycle_mean(n, &w_known).map_or(Q::zero(), |c| c.max(Q::zero()));
    // cycle means have denominators dividing n^2 e, so delta keeps strict gaps strict
    let delta = if r.is_zero() { Q::zero() } else { q(1, 2 * (n * n) as i64 * m.ram() as i64) };
    let combined: Vec<Option<Q>> = (0..n * n)
        .map(|k| match (&val.known[k], &val.unknown[k]) {
            (Some(v), _) => Some(v.clone()),
            (None, Some(p)) => Some(p - &delta),
            (None, None) => None,
        })
        .collect();
    // largest cycle mean once unknown entries are known at least below `floor`
    let tail_mean = |floor: Option<&Q>| {
        let w: Vec<Option<Q>> = (0..n * n)
            .map(|k| match (&val.known[k], &val.unknown[k]) {
                (Some(v), _) => Some(-v.clone()),
                (None, Some(p)) => Some(&delta - floor.map_or(p, |f| p.max(f))),
                (None, None) => None,
            })
            .collect();
        max_cycle_mean(n, &w)
    };
    if tail_mean(None).is_some_and(|c| c > r) {
        let known = val.unknown.iter().flatten().min().cloned().unwrap_or_else(Q::zero);
        let step = q(1, m.ram() as i64);
        let mut needed = known.clone();
        while tail_mean(Some(&needed)).is_some_and(|c| c > r) {
            needed += &step;
        }
        return Err(Error::precision("certifying the slope", &needed, &known));
    }
    let w: Vec<Option<Q>> = combined.iter().map(|v| v.as_ref().map(|v| v + &r)).collect();
    let x = Point::new(bellman_ford(n, &w)).normalized();
    Ok((x, r))
}

/// Result of the slope computation.
#[derive(Clone, Debug)]
pub struct SlopeReport {
    pub slope: Q,
    /// Leading stratum of the final connection at the optimal point.
    pub stratum: Stratum,
    pub fundamental: bool,
    /// The connection after the descent; `gauge` carries the input to it.
    pub connection: Connection,
    pub gauge: LoopMatrix,
    pub gauge_inv: LoopMatrix,
    pub steps: usize,
}

const MAX_DESCENT_STEPS: usize = 10_000;

/// The slope: the depth of a fundamental stratum contained in `c` after a
/// suitable change of trivialization, and `0` for regular singular `c`.
pub fn slope(c: &Connection) -> Result<Q> {
    Ok(slope_report(c)?.slope)
}

/// Computes the slope together with a trivialization and point realizing it.
///
/// Each round moves to an optimal apartment point. If the leading term there
/// is nilpotent, a constant change of basis inside the reductive quotient puts
/// its kernel flag in coordinate form; the leading term then raises the level
/// of that flag, so moving the point against the levels strictly lowers the
/// optimal depth. Depths lie in `(1/(n^2 e))Z`, so the loop terminates.
pub fn slope_report(c: &Connection) -> Result<SlopeReport> {
    let e = c.matrix().ram();
    if e > 1 {
        // over u = z^{1/e}: M(z) dz/z = e M(u^e) du/u, and grades scale by e
        let mu = c.matrix().unramify().scale_q(&qi(e as i64));
        let rep = slope_report(&Connection::new(mu))?;
        let eq = qi(e as i64);
        let x = Point::new(rep.stratum.x.coords().iter().map(|v| v / &eq).collect());
        let beta0 = rep.stratum.beta0.reramify(e).scale_q(&q(1, e as i64));
        let r = &rep.slope / &eq;
        return Ok(SlopeReport {
            slope: r.clone(),
            stratum: Stratum { x, r, beta0 },
            fundamental: rep.fundamental,
            connection: Connection::new(rep.connection.matrix.reramify(e).scale_q(&q(1, e as i64))),
            gauge: rep.gauge.reramify(e),
            gauge_inv: rep.gauge_inv.reramify(e),
            steps: rep.steps,
        });
    }
    let n = c.n();
    let mut m = c.matrix().clone();
    let mut g = LoopMatrix::identity(n);
    let mut g_inv = LoopMatrix::identity(n);
    let mut last: Option<Q> = None;
    for step in 0..MAX_DESCENT_STEPS {
        let (x, r) = optimal_point(&m)?;
        if last.as_ref().is_some_and(|l| &r >= l) {
            return Err(Error::Stalled(step));
        }
        let conn = Connection::new(m.clone());
        let st = leading_stratum(&conn, &x)?;
        debug_assert!(st.r == r);
        let b = st.leading_coefficients();
        if r.is_zero() || !b.is_nilpotent() {
            let fundamental = !b.is_nilpotent();
            return Ok(SlopeReport {
                slope: r,
                stratum: st,
                fundamental,
                connection: conn,
                gauge: g,
                gauge_inv: g_inv,
                steps: step,
            });
        }
        let h = kernel_flag_basis(&b, &x);
        let h_inv = h.inverse().expect("flag basis is a basis");
        // Ad(theta(h^{-1})) replaces B by h^{-1} B h
        let p = theta_lift(&h_inv, &x)?;
        let p_inv = theta_lift(&h, &x)?;
        m = gauge_matrix(&p, &p_inv, &m);
        g = &p * &g;
        g_inv = &g_inv * &p_inv;
        last = Some(r);
    }
    Err(Error::Stalled(MAX_DESCENT_STEPS))
}

/// Basis adapted to `0 < ker B < ker B^2 < ...` for nilpotent `B`, chosen
/// inside each residue class of `x` modulo `Z` and placed on that class's
/// indices, so that the change of basis lies in the reductive quotient at `x`.
fn kernel_flag_basis(b: &Dense, x: &Point) -> Dense {
    let n = b.rows;
    let mut out = Dense::zeros(n, n);
    let mut powers = vec![b.clone()];
    for _ in 1..n {
        let next = powers.last().unwrap().mul(b);
        powers.push(next);
    }
    for (_, idx) in residue_classes(x) {
        let mut chosen: Vec<Vec<Cyclotomic>> = Vec::new();
        for bt in &powers {
            if chosen.len() == idx.len() {
                break;
            }
            let mut restricted = Dense::zeros(n, idx.len());
            for i in 0..n {
                for (c, &j) in idx.iter().enumerate() {
                    restricted.set(i, c, bt.get(i, j).clone());
                }
            }
            for v in restricted.nullspace() {
                let mut trial = chosen.clone();
                trial.push(v.clone());
                if rank_of_vectors(&trial) == trial.len() {
                    chosen = trial;
                }
            }
        }
        debug_assert_eq!(chosen.len(), idx.len());
        for (slot, v) in idx.iter().zip(&chosen) {
            for (c, &i) in idx.iter().enumerate() {
                out.set(i, *slot, v[c].clone());
            }
        }
    }
    out
}

fn rank_of_vectors(vs: &[Vec<Cyclotomic>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let cols = vs[0].len();
    Dense::from_rows(vs.len(), cols, vs.iter().flatten().cloned().collect()).rank()
}

/// Evidence that a stratum is regular.
#[derive(Clone, Debug)]
pub struct RegularWitness {
    /// Conjugacy class of the centralizer torus.
    pub class: WeylClass,
    /// The block-Coxeter representative of that class.
    pub torus: TorusData,
    /// Homogeneous basis of the centralizer of `beta0` over one period of grades.
    pub centralizer: Vec<LoopMatrix>,
    /// Whether `beta0` already lies in the Cartan of `torus` (no conjugation needed).
    pub in_standard_cartan: bool,
}

/// Basis of the centralizer of `beta0`, one homogeneous piece per critical
/// number of `x` in `[0, 1)`.
pub fn centralizer_basis(st: &Stratum) -> Vec<LoopMatrix> {
    let b = st.leading_coefficients();
    let n = b.rows;
    let mut out = Vec::new();
    for s in apartment::critical_numbers(&st.x) {
        let pattern = grade_pattern(&st.x, &s);
        // unknowns: X_p for p in pattern; equations: (XB - BX)_{ij} = 0
        let mut sys = Dense::zeros(n * n, pattern.len());
        for (col, &(a, c)) in pattern.iter().enumerate() {
            // E_ac B - B E_ac
            for j in 0..n {
                let v = sys.get(a * n + j, col) + b.get(c, j);
                sys.set(a * n + j, col, v);
            }
            for i in 0..n {
                let v = sys.get(i * n + c, col) - b.get(i, a);
                sys.set(i * n + c, col, v);
            }
        }
        for v in sys.nullspace() {
            let mut xc = Dense::zeros(n, n);
            for (k, &(a, c)) in pattern.iter().enumerate() {
                xc.set(a, c, v[k].clone());
            }
            out.push(homogeneous_from_coefficients(&xc, &st.x, &s));
        }
    }
    out
}

/// Decides regularity: the stratum is fundamental (for `r > 0`), its leading
/// term has an abelian centralizer of dimension `n` over one period whose
/// elements are semisimple, and at depth zero it is nonresonant.
///
/// Fails only when a depth-zero leading term has eigenvalues outside `Q`.
pub fn is_regular_stratum(st: &Stratum) -> Result<Option<RegularWitness>> {
    let n = st.x.n();
    let b = st.leading_coefficients();
    if st.r > Q::zero() && b.is_nilpotent() {
        return Ok(None);
    }
    let centralizer = centralizer_basis(st);
    if centralizer.len() != n {
        return Ok(None);
    }
    for (i, a) in centralizer.iter().enumerate() {
        for c in &centralizer[i + 1..] {
            if !a.commutator(c).is_zero_to_precision() {
                return Ok(None);
            }
        }
    }
    if !b.charpoly().is_squarefree() {
        return Ok(None);
    }
    let class = if st.r.is_zero() {
        if resonant_root(st)?.is_some() {
            return Ok(None);
        }
        WeylClass::new(vec![1; n])
    } else {
        let d = num_traits::ToPrimitive::to_usize(st.r.denom()).unwrap();
        let zeros = n - b.rank();
        let mut parts = vec![d; (n - zeros) / d];
        parts.extend(core::iter::repeat_n(1, zeros));
        WeylClass::new(parts)
    };
    let torus = TorusData::standard(&class);
    let in_standard_cartan = non_cartan_part(&torus, &st.beta0)?.is_zero_to_precision();
    Ok(Some(RegularWitness { class, torus, centralizer, in_standard_cartan }))
}

/// Eigenvalues of the depth-zero leading coefficient matrix, per index. A
/// diagonal residue-class block of `B` keeps its order; otherwise the block's
/// eigenvalues are attached to the class's indices in increasing order.
pub fn depth_zero_eigenvalues(st: &Stratum) -> Result<Vec<Q>> {
    let b = st.leading_coefficients();
    let n = b.rows;
    let mut out: Vec<Q> = vec![Q::zero(); n];
    for (_, idx) in residue_classes(&st.x) {
        let mut block = Dense::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                block.set(a, c, b.get(i, j).clone());
            }
        }
        let diagonal: Option<Vec<Q>> = if block.is_diagonal() {
            (0..idx.len()).map(|a| block.get(a, a).as_rational().cloned()).collect()
        } else {
            None
        };
        if let Some(d) = diagonal {
            for (slot, v) in idx.iter().zip(d) {
                out[*slot] = v;
            }
            continue;
        }
        let roots = block.charpoly().rational_roots();
        let mut roots = match roots {
            Some(r) if r.len() == idx.len() => r,
            _ => {
                return Err(Error::EigenvaluesOutsideField(String::from(
                    "depth-zero leading term has eigenvalues outside Q",
                )))
            }
        };
        roots.sort();
        for (slot, v) in idx.iter().zip(roots) {
            out[*slot] = v;
        }
    }
    Ok(out)
}

/// A root `(i, j)` witnessing resonance of a depth-zero stratum: with `b` the
/// eigenvalues of the residue, `b_i - b_j + x_i - x_j` is an integer while
/// `b_i - b_j` is negative. `None` when nonresonant.
pub fn resonant_root(st: &Stratum) -> Result<Option<(usize, usize)>> {
    if !st.r.is_zero() {
        return Ok(None);
    }
    let b = depth_zero_eigenvalues(st)?;
    let x = st.x.coords();
    let n = b.len();
    for i in 0..n {
        for j in 0..n {
            let a = &b[i] - &b[j];
            if i != j && a < Q::zero() && is_integer(&(&a + &x[i] - &x[j])) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// `x` shifted by `c (1, ..., 1)`.
pub fn central_shift(x: &Point, c: &Q) -> Point {
    Point::new(x.coords().iter().map(|v| v + c).collect())
}

/// Fractional parts of the coordinates; used to compare points modulo the
/// integral translations.
pub fn fractional_point(x: &Point) -> Vec<Q> {
    x.coords().iter().map(frac).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{PuiseuxSeries, Precision};

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_i64(n)
    }

    fn pt(v: &[(i64, i64)]) -> Point {
        Point::new(v.iter().map(|(a, b)| q(*a, *b)).collect())
    }

    fn el(n: usize, i: usize, j: usize, v: i64, k: i64) -> LoopMatrix {
        LoopMatrix::elementary(n, i, j, c(v), k, 1)
    }

    /// `w^{-1}` for the standard `GL_2` uniformizer: `E12 z^{-1} + E21`.
    fn w2_inv() -> LoopMatrix {
        &el(2, 0, 1, 1, -1) + &el(2, 1, 0, 1, 0)
    }

    #[test]
    fn leading_stratum_of_the_inverse_uniformizer() {
        let conn = Connection::new(w2_inv());
        let st = leading_stratum(&conn, &pt(&[(0, 1), (-1, 2)])).unwrap();
        assert_eq!(st.r, q(1, 2));
        assert_eq!(st.beta0, w2_inv());
        assert!(is_fundamental(&st));
        assert!(contains_stratum(&conn, &st).unwrap());
    }

    #[test]
    fn nilpotent_pole_is_not_fundamental() {
        let conn = Connection::new(el(2, 0, 1, 1, -1));
        let st = leading_stratum(&conn, &Point::origin(2)).unwrap();
        assert_eq!(st.r, qi(1));
        assert!(!is_fundamental(&st));
    }

    #[test]
    fn deeper_non_fundamental_strata_are_contained() {
        let m = LoopMatrix::diagonal(&[c(1), c(2)]).shift_q(&qi(-1));
        let conn = Connection::new(m);
        let x = Point::origin(2);
        let st = leading_stratum(&conn, &x).unwrap();
        assert_eq!(st.r, qi(1));
        let zero = LoopMatrix::zeros(2, 1, Precision::Exact);
        // a zero leading term two grades down is contained but not fundamental
        let deeper = Stratum::new(x.clone(), qi(2), zero).unwrap();
        assert!(contains_stratum(&conn, &deeper).unwrap());
        assert!(!is_fundamental(&deeper));
        let wrong = Stratum::new(x, qi(2), el(2, 0, 0, 1, -2)).unwrap();
        assert!(!contains_stratum(&conn, &wrong).unwrap());
    }

    #[test]
    fn optimal_point_of_the_uniformizer_family() {
        let (x, r) = optimal_point(&w2_inv()).unwrap();
        assert_eq!(r, q(1, 2));
        assert_eq!(x, pt(&[(0, 1), (-1, 2)]));
        // E12 z^{-5} + E21 z^3 has cycle mean 1 and needs x_2 - x_1 = -4
        let m = &el(2, 0, 1, 1, -5) + &el(2, 1, 0, 1, 3);
        let (x, r) = optimal_point(&m).unwrap();
        assert_eq!(r, qi(1));
        assert_eq!(x, pt(&[(0, 1), (-4, 1)]));
    }

    #[test]
    fn slopes_of_small_examples() {
        assert_eq!(slope(&Connection::new(w2_inv())).unwrap(), q(1, 2));
        // w^{-3} = [[0, z^-2], [z^-1, 0]]
        let w3 = &el(2, 0, 1, 1, -2) + &el(2, 1, 0, 1, -1);
        assert_eq!(slope(&Connection::new(w3)).unwrap(), q(3, 2));
        assert_eq!(slope(&Connection::new(el(2, 0, 1, 1, -1))).unwrap(), Q::zero());
        let d = LoopMatrix::diagonal(&[c(1), c(2)]).shift_q(&qi(-2));
        assert_eq!(slope(&Connection::new(d)).unwrap(), qi(2));
    }

    #[test]
    fn slope_survives_a_shear_and_a_unipotent_pole() {
        let g = LoopMatrix::z_power(&[qi(2), qi(0)]);
        let g_inv = LoopMatrix::z_power(&[qi(-2), qi(0)]);
        let conj = Connection::new(w2_inv()).gauge(&g, &g_inv);
        let u = &LoopMatrix::identity(2) + &el(2, 1, 0, 1, -3);
        let u_inv = &LoopMatrix::identity(2) - &el(2, 1, 0, 1, -3);
        let hidden = conj.gauge(&u, &u_inv);
        let rep = slope_report(&hidden).unwrap();
        assert_eq!(rep.slope, q(1, 2));
        assert!(rep.fundamental);
        let again = hidden.gauge(&rep.gauge, &rep.gauge_inv);
        assert_eq!(again.matrix(), rep.connection.matrix());
    }

    #[test]
    fn ramified_input_is_rescaled() {
        // u^{-1} I with u = z^{1/2}: the slope is 1/2
        let s = PuiseuxSeries::monomial(c(1), -1, 2);
        let m = LoopMatrix::from_fn(2, |i, j| if i == j { s.clone() } else { PuiseuxSeries::exact_zero() });
        let rep = slope_report(&Connection::new(m)).unwrap();
        assert_eq!(rep.slope, q(1, 2));
    }

    #[test]
    fn regularity_examples() {
        let half = pt(&[(0, 1), (-1, 2)]);
        let st = Stratum::new(half, q(1, 2), w2_inv()).unwrap();
        let w = is_regular_stratum(&st).unwrap().unwrap();
        assert_eq!(w.class, WeylClass::new(vec![2]));
        assert!(w.in_standard_cartan);

        let o = Point::origin(2);
        let d = LoopMatrix::diagonal(&[c(1), c(2)]).shift_q(&qi(-1));
        let w = is_regular_stratum(&Stratum::new(o.clone(), qi(1), d).unwrap()).unwrap().unwrap();
        assert!(w.class.is_identity());

        let jordan = (&LoopMatrix::identity(2) + &el(2, 0, 1, 1, 0)).shift_q(&qi(-1));
        assert!(is_regular_stratum(&Stratum::new(o.clone(), qi(1), jordan).unwrap()).unwrap().is_none());

        let res = LoopMatrix::diagonal(&[c(1), c(0)]);
        let st = Stratum::new(o.clone(), qi(0), res).unwrap();
        assert_eq!(resonant_root(&st).unwrap(), Some((1, 0)));
        assert!(is_regular_stratum(&st).unwrap().is_none());

        let ok = LoopMatrix::diagonal_q(&[q(1, 3), qi(0)]);
        assert!(is_regular_stratum(&Stratum::new(o, qi(0), ok).unwrap()).unwrap().is_some());
    }

    #[test]
    fn candidate_points_are_small() {
        assert_eq!(candidate_points(1), vec![Point::origin(1)]);
        // e = 1: (0,0); e = 2 adds (0,1/2)
        assert_eq!(candidate_points(2).len(), 2);
        assert!(candidate_points(3).contains(&pt(&[(0, 1), (1, 3), (2, 3)])));
    }
}

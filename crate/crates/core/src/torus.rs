//! Regular conjugacy classes of `S_n`, block-Coxeter tori and the tame
//! corestriction onto their Lie algebras.
//!
//! The torus of cycle type `(e_1, ..., e_k)` is block diagonal. Block `j`
//! has size `e_j` and is generated over `F` by its uniformizer
//! `w_j = sum_i E_{i,i+1} + z E_{e_j,1}`, which satisfies `w_j^{e_j} = z`.
//! Its base point is `(0, -1/e_j, ..., -(e_j - 1)/e_j)` on each block, where
//! `w_j` is homogeneous of grade `1/e_j`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::apartment::{self, exp_homogeneous, mp_decompose, AffineWeyl, Point};
use crate::error::{Error, Result};
use crate::scalars::{
    frac, gcd_i64, is_integer, lcm_i64, q, qi, Cyclotomic, LoopMatrix, Precision, PuiseuxSeries, Q,
};

/// Conjugacy class of `S_n` by cycle type, parts in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylClass {
    parts: Vec<usize>,
}

impl WeylClass {
    pub fn new(mut parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p > 0));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        WeylClass { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// A permutation of this cycle type: consecutive blocks cycled `i -> i + 1`.
    pub fn representative(&self) -> Vec<usize> {
        let mut perm = Vec::with_capacity(self.n());
        let mut start = 0;
        for &p in &self.parts {
            for i in 0..p {
                perm.push(start + (i + 1) % p);
            }
            start += p;
        }
        perm
    }
}

impl fmt::Display for WeylClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// The regular classes: `n/k` cycles of length `k`, or `(n-1)/k` cycles of
/// length `k` plus a fixed point.
pub fn regular_classes(n: usize) -> Vec<WeylClass> {
    let mut out: Vec<WeylClass> = Vec::new();
    for k in 1..=n {
        if n.is_multiple_of(k) {
            out.push(WeylClass::new(vec![k; n / k]));
        }
        if n > 1 && (n - 1).is_multiple_of(k) {
            let mut parts = vec![k; (n - 1) / k];
            parts.push(1);
            out.push(WeylClass::new(parts));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Depths at which strata regular for a torus of the given class occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibleDepths {
    /// Split torus: every non-negative integer.
    NonNegativeIntegers,
    /// Every `m/d` with `m > 0` coprime to `d`.
    Coprime { denominator: i64 },
}

impl AdmissibleDepths {
    pub fn contains(&self, r: &Q) -> bool {
        match self {
            AdmissibleDepths::NonNegativeIntegers => is_integer(r) && r >= &Q::zero(),
            AdmissibleDepths::Coprime { denominator } => {
                r > &Q::zero() && num_traits::ToPrimitive::to_i64(r.denom()) == Some(*denominator)
            }
        }
    }
}

impl fmt::Display for AdmissibleDepths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibleDepths::NonNegativeIntegers => f.write_str("r in Z, r >= 0"),
            AdmissibleDepths::Coprime { denominator } => write!(f, "r = m/{denominator}, gcd(m,{denominator}) = 1"),
        }
    }
}

pub fn regular_depths(cls: &WeylClass) -> Result<AdmissibleDepths> {
    if !regular_classes(cls.n()).contains(cls) {
        return Err(Error::NotRegularClass(alloc::format!("{cls}")));
    }
    if cls.is_identity() {
        return Ok(AdmissibleDepths::NonNegativeIntegers);
    }
    Ok(AdmissibleDepths::Coprime { denominator: cls.parts[0] as i64 })
}

/// A block-Coxeter torus in the standard block layout.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusData {
    blocks: Vec<usize>,
}

impl TorusData {
    /// Blocks are laid out along the diagonal in the given order.
    pub fn new(blocks: Vec<usize>) -> Self {
        assert!(!blocks.is_empty() && blocks.iter().all(|&e| e > 0));
        TorusData { blocks }
    }

    pub fn standard(cls: &WeylClass) -> Self {
        Self::new(cls.parts().to_vec())
    }

    pub fn split(n: usize) -> Self {
        Self::new(vec![1; n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn class(&self) -> WeylClass {
        WeylClass::new(self.blocks.clone())
    }

    pub fn is_split(&self) -> bool {
        self.blocks.iter().all(|&e| e == 1)
    }

    pub fn offset(&self, j: usize) -> usize {
        self.blocks[..j].iter().sum()
    }

    /// Ramification of the splitting field.
    pub fn splitting_ramification(&self) -> u32 {
        self.blocks.iter().fold(1i64, |acc, &e| lcm_i64(acc, e as i64)) as u32
    }

    /// `(0, -1/e_j, ..., -(e_j-1)/e_j)` on every block.
    pub fn base_point(&self) -> Point {
        let mut coords = Vec::with_capacity(self.n());
        for &e in &self.blocks {
            for i in 0..e {
                coords.push(q(-(i as i64), e as i64));
            }
        }
        Point::new(coords)
    }

    /// `w_j^k` in block `j`, zero elsewhere.
    pub fn block_power(&self, j: usize, k: i64) -> LoopMatrix {
        let n = self.n();
        let e = self.blocks[j] as i64;
        let off = self.offset(j);
        let (qz, c) = (k.div_euclid(e), k.rem_euclid(e));
        let mut entries: Vec<PuiseuxSeries> = (0..n * n).map(|_| PuiseuxSeries::exact_zero()).collect();
        for i in 0..e {
            let (col, shift) = if i + c < e { (i + c, qz) } else { (i + c - e, qz + 1) };
            entries[(off + i as usize) * n + off + col as usize] =
                PuiseuxSeries::monomial(Cyclotomic::one(), shift, 1);
        }
        LoopMatrix::from_entries(n, entries)
    }

    /// Block identity projector.
    pub fn block_identity(&self, j: usize) -> LoopMatrix {
        self.block_power(j, 0)
    }

    /// Group element acting as `w_j^p` on block `j` and the identity elsewhere.
    pub fn uniformizer_group(&self, j: usize, p: i64) -> LoopMatrix {
        let mut m = self.block_power(j, p);
        for (jj, _) in self.blocks.iter().enumerate() {
            if jj != j {
                m = &m + &self.block_identity(jj);
            }
        }
        m
    }

    /// Lie algebra basis over `F`: `w_j^k` for `0 <= k < e_j`.
    pub fn basis(&self) -> Vec<(usize, i64, LoopMatrix)> {
        let mut out = Vec::new();
        for (j, &e) in self.blocks.iter().enumerate() {
            for k in 0..e as i64 {
                out.push((j, k, self.block_power(j, k)));
            }
        }
        out
    }
}

impl fmt::Display for TorusData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", WeylClass { parts: self.blocks.clone() })
    }
}

/// Element `sum_j sum_k c_{j,k} w_j^k` of a block-Coxeter Cartan.
///
/// `prec[j]` is the exclusive bound on known exponents of `w_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SElement {
    pub coeffs: Vec<BTreeMap<i64, Cyclotomic>>,
    pub prec: Vec<Precision>,
}

impl SElement {
    pub fn zero(torus: &TorusData) -> Self {
        SElement {
            coeffs: vec![BTreeMap::new(); torus.blocks().len()],
            prec: vec![Precision::Exact; torus.blocks().len()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(BTreeMap::is_empty)
    }

    pub fn to_matrix(&self, torus: &TorusData) -> LoopMatrix {
        let n = torus.n();
        let mut acc = LoopMatrix::zeros(n, 1, Precision::Exact);
        for (j, terms) in self.coeffs.iter().enumerate() {
            for (k, c) in terms {
                acc = &acc + &torus.block_power(j, *k).scale(c);
            }
        }
        let e_prec = self
            .prec
            .iter()
            .zip(torus.blocks())
            .map(|(p, &e)| match p {
                Precision::Exact => Precision::Exact,
                Precision::Below(k) => Precision::Below(k.div_euclid(e as i64)),
            })
            .fold(Precision::Exact, Precision::min);
        acc.truncate(e_prec)
    }

    /// Coefficients by grade `k/e_j`.
    pub fn graded_terms<'a>(&'a self, torus: &'a TorusData) -> impl Iterator<Item = (usize, Q, &'a Cyclotomic)> + 'a {
        self.coeffs.iter().enumerate().flat_map(move |(j, terms)| {
            let e = torus.blocks()[j] as i64;
            terms.iter().map(move |(k, c)| (j, q(*k, e), c))
        })
    }
}

fn exact_zero_or(s: Option<PuiseuxSeries>) -> PuiseuxSeries {
    s.unwrap_or_else(PuiseuxSeries::exact_zero)
}

/// Orthogonal projection onto the Cartan of `torus` for the trace form
/// `tr(XY)`: on block `j`, `sum_{k<e_j} (1/e_j) tr(M_j w_j^{-k}) w_j^k`.
/// Off-diagonal blocks project to zero.
pub fn pi_s(torus: &TorusData, m: &LoopMatrix) -> Result<SElement> {
    let mut out = SElement::zero(torus);
    for (j, &e) in torus.blocks().iter().enumerate() {
        let off = torus.offset(j);
        let e_i = e as i64;
        let mut block_prec = Precision::Exact;
        for k in 0..e {
            // tr(M_j w^{-k}); with c = e - k, w^{-k} = z^{-1} w^c
            let mut tr: Option<PuiseuxSeries> = None;
            for i in 0..e {
                let term = if k == 0 {
                    m.get(off + i, off + i).clone()
                } else {
                    let c = e - k;
                    if i + c < e {
                        m.get(off + i + c, off + i).shift(-(m.ram() as i64))
                    } else {
                        m.get(off + i + c - e, off + i).clone()
                    }
                };
                tr = Some(match tr {
                    None => term,
                    Some(s) => &s + &term,
                });
            }
            let tr = exact_zero_or(tr).reduced_ramification();
            if tr.ram() != 1 {
                return Err(Error::Invalid(String::from("projection of a ramified matrix")));
            }
            if let Precision::Below(p) = tr.precision() {
                block_prec = block_prec.min(Precision::Below(k as i64 + p * e_i));
            }
            for (mz, c) in tr.terms() {
                out.coeffs[j].insert(k as i64 + mz * e_i, c.scale(&q(1, e_i)));
            }
        }
        out.prec[j] = block_prec;
        out.coeffs[j].retain(|k, _| block_prec.admits(*k));
    }
    Ok(out)
}

/// `M - pi_s(M)` as a matrix.
pub fn non_cartan_part(torus: &TorusData, m: &LoopMatrix) -> Result<LoopMatrix> {
    let p = pi_s(torus, m)?.to_matrix(torus);
    Ok(m - &p)
}

/// Conjugator `q` (with inverse) presenting the Cartan `Ad(q)(s)`.
#[derive(Clone, Copy, Debug)]
pub struct Conjugate<'a> {
    pub q: &'a LoopMatrix,
    pub q_inv: &'a LoopMatrix,
}

/// Decides whether `x` is graded compatible with `Ad(q)(s)`, or with `s` when
/// no conjugator is given: the Cartan must be stable under `tau + ad(x)` and
/// its grade-zero part must be diagonal.
pub fn is_graded_compatible(x: &Point, torus: &TorusData, conj: Option<Conjugate<'_>>) -> Result<bool> {
    let xm = x.matrix();
    for (_, _, b) in torus.basis() {
        let b = match conj {
            Some(c) => &(c.q * &b) * c.q_inv,
            None => b,
        };
        let d = &b.tau() + &xm.commutator(&b);
        let pulled = match conj {
            Some(c) => &(c.q_inv * &d) * c.q,
            None => d,
        };
        if !non_cartan_part(torus, &pulled)?.is_zero_to_precision() {
            return Ok(false);
        }
        for (g, comp) in mp_decompose(&b, x).components {
            if is_integer(&g) && !is_diagonal(&comp) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn is_diagonal(m: &LoopMatrix) -> bool {
    let n = m.n();
    (0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j).is_zero_to_precision()))
}

/// Witness `v` with `v(y)` in `base_point + s(0)`, i.e. membership of `y` in
/// the set of points compatible with some torus of this type.
pub fn compatibility_witness(y: &Point, torus: &TorusData) -> Option<AffineWeyl> {
    let n = torus.n();
    let base = torus.base_point();
    let mut found = None;
    for_each_permutation(n, &mut |perm| {
        let w = AffineWeyl::new(vec![0; n], perm.to_vec());
        let wy = w.act(y);
        let diff: Vec<Q> = (0..n).map(|i| &wy.coords()[i] - &base.coords()[i]).collect();
        let mut mu = vec![0i64; n];
        for (j, &e) in torus.blocks().iter().enumerate() {
            let off = torus.offset(j);
            let lead = &diff[off];
            for i in off..off + e {
                let delta = lead - &diff[i];
                match crate::scalars::to_i64(&delta) {
                    Some(d) => mu[i] = d,
                    None => return false,
                }
            }
        }
        found = Some(AffineWeyl::new(mu, perm.to_vec()));
        true
    });
    found
}

/// Calls `f` on permutations of `0..n` in lexicographic order until it returns true.
pub fn for_each_permutation<F: FnMut(&[usize]) -> bool>(n: usize, f: &mut F) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if f(&perm) {
            return;
        }
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// Diagonalizer `g = z^{-t} h` of a block-Coxeter Cartan over the splitting
/// field `E = F(z^{1/e})`.
#[derive(Clone, Debug)]
pub struct Diagonalizer {
    pub g: LoopMatrix,
    pub g_inv: LoopMatrix,
    pub ramification: u32,
}

/// On block `j`, `g_{ab} = xi^{ab} u_j^a` with `xi` a primitive `e_j`-th root
/// and `u_j = z^{1/e_j}`; the columns are eigenvectors of `w_j` with
/// eigenvalues `xi^b u_j`.
pub fn w_diagonalizer(torus: &TorusData) -> Diagonalizer {
    let n = torus.n();
    let e_all = torus.splitting_ramification();
    let mut g: Vec<PuiseuxSeries> = (0..n * n).map(|_| PuiseuxSeries::exact_zero()).collect();
    let mut gi: Vec<PuiseuxSeries> = (0..n * n).map(|_| PuiseuxSeries::exact_zero()).collect();
    for (j, &e) in torus.blocks().iter().enumerate() {
        let off = torus.offset(j);
        let e = e as i64;
        let step = e_all as i64 / e;
        for a in 0..e {
            for b in 0..e {
                let xi = Cyclotomic::zeta_pow(e as u32, a * b);
                g[(off + a as usize) * n + off + b as usize] = PuiseuxSeries::monomial(xi, a * step, e_all);
                let xi_inv = Cyclotomic::zeta_pow(e as u32, -a * b).scale(&q(1, e));
                gi[(off + b as usize) * n + off + a as usize] = PuiseuxSeries::monomial(xi_inv, -a * step, e_all);
            }
        }
    }
    Diagonalizer {
        g: LoopMatrix::from_entries(n, g),
        g_inv: LoopMatrix::from_entries(n, gi),
        ramification: e_all,
    }
}

/// Gauge action `g . M = g M g^{-1} - tau(g) g^{-1}` with a known inverse.
pub fn gauge_matrix(g: &LoopMatrix, g_inv: &LoopMatrix, m: &LoopMatrix) -> LoopMatrix {
    &(&(g * m) * g_inv) - &(&g.tau() * g_inv)
}

/// Given `q0` in the parahoric at `x`, where `x` is graded compatible with
/// the standard Cartan `s`, returns `q` in the parahoric at `x` such that
/// `q^{-1} Ad(q0)(s) q` is graded compatible with `x`, to grades below `bound`.
///
/// Corrections `exp(-Y/l)` remove, grade by grade, the part of
/// `Ad(r^{-1}) x + r^{-1} tau(r) - x` outside `s`; that vanishing is
/// equivalent to `tau + ad(x)` stabilizing `Ad(r)(s)`.
pub fn graded_conjugator(q0: &LoopMatrix, torus: &TorusData, x: &Point, bound: &Q) -> Result<GradedConjugator> {
    if !is_graded_compatible(x, torus, None)? {
        return Err(Error::NotCompatible(alloc::format!("{x} is not graded compatible with {torus}")));
    }
    let work = bound + x.spread() + qi(1);
    let q0 = q0.truncate_q(&work);
    let q0_inv = q0.inverse()?;
    if !apartment::in_filtration(&q0, x, &Q::zero())? || !apartment::in_filtration(&q0_inv, x, &Q::zero())? {
        return Err(Error::NotCompatible(String::from("conjugator is not in the parahoric at x")));
    }
    let xm = x.matrix();
    let mut r = q0.clone();
    let mut r_inv = q0_inv.clone();
    let mut w = gauge_matrix(&q0_inv, &q0, &xm);
    let grades = apartment::critical_grades(x, &Q::zero(), bound, true);
    for l in grades {
        let comp = apartment::component(&(&w - &xm), x, &l)?;
        let off = non_cartan_part(torus, &comp)?;
        if off.is_zero_to_precision() {
            continue;
        }
        if l.is_zero() {
            return Err(Error::NotCompatible(String::from("grade-zero defect outside the Cartan")));
        }
        let z = off.scale_q(&(-l.recip()));
        let c = exp_homogeneous(&z, &l, x, &work);
        let c_inv = exp_homogeneous(&z.scale_q(&qi(-1)), &l, x, &work);
        w = gauge_matrix(&c_inv, &c, &w);
        r = &r * &c;
        r_inv = &c_inv * &r_inv;
    }
    let q = &q0 * &r_inv;
    let q_inv = &r * &q0_inv;
    Ok(GradedConjugator { q, q_inv, cartan_conjugator: r, cartan_conjugator_inv: r_inv })
}

/// Output of [`graded_conjugator`]: `q` and the resulting `r = q^{-1} q0`
/// with `Ad(r)(s)` graded compatible.
#[derive(Clone, Debug)]
pub struct GradedConjugator {
    pub q: LoopMatrix,
    pub q_inv: LoopMatrix,
    pub cartan_conjugator: LoopMatrix,
    pub cartan_conjugator_inv: LoopMatrix,
}

/// Residues `1 <= k <= e` prime to `e`.
pub fn units_mod(e: i64) -> Vec<i64> {
    (1..=e).filter(|k| gcd_i64(*k, e) == 1).collect()
}

/// Fractional parts of the base-point grades, per block.
pub fn block_grades(torus: &TorusData) -> Vec<Vec<Q>> {
    torus
        .blocks()
        .iter()
        .map(|&e| (0..e as i64).map(|k| frac(&q(k, e as i64))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apartment::mp_depth;
    use crate::scalars::linalg::Dense;
    use proptest::prelude::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_i64(n)
    }

    #[test]
    fn small_regular_classes() {
        let names = |n| regular_classes(n).iter().map(|c| alloc::format!("{c}")).collect::<Vec<_>>();
        assert_eq!(names(2), vec!["[1,1]", "[2]"]);
        assert_eq!(names(4), vec!["[1,1,1,1]", "[2,2]", "[3,1]", "[4]"]);
        assert_eq!(
            regular_depths(&WeylClass::new(vec![2, 2])).unwrap(),
            AdmissibleDepths::Coprime { denominator: 2 }
        );
        assert!(regular_depths(&WeylClass::new(vec![2, 1, 1])).is_err());
        assert!(regular_depths(&WeylClass::new(vec![1, 1])).unwrap().contains(&qi(3)));
    }

    #[test]
    fn uniformizer_powers() {
        for e in 1..=4usize {
            let t = TorusData::new(vec![e]);
            let w = t.block_power(0, 1);
            assert_eq!(w.pow(e as u32), LoopMatrix::identity(e).shift_q(&qi(1)));
            assert_eq!(&w * &t.block_power(0, -1), LoopMatrix::identity(e));
            assert_eq!(mp_depth(&w, &t.base_point()).unwrap(), q(1, e as i64));
        }
    }

    #[test]
    fn projection_is_trace_orthogonal() {
        let t = TorusData::new(vec![2, 1]);
        let m = LoopMatrix::from_fn(3, |i, j| {
            PuiseuxSeries::from_terms(1, Precision::Below(4), [((i + 2 * j) as i64 - 2, c(1 + i as i64 - j as i64))])
        });
        let p = pi_s(&t, &m).unwrap();
        let rest = &m - &p.to_matrix(&t);
        // the residual pairs to zero with every w_j^k
        for j in 0..2 {
            for k in -2..3 {
                let b = t.block_power(j, k);
                assert!(crate::apartment::trace_pairing(&rest, &b).unwrap().is_zero());
            }
        }
        // idempotent
        assert_eq!(pi_s(&t, &p.to_matrix(&t)).unwrap().coeffs, p.coeffs);
    }

    #[test]
    fn base_point_is_graded_compatible() {
        for blocks in [vec![2], vec![3], vec![2, 2], vec![3, 1], vec![1, 1, 1]] {
            let t = TorusData::new(blocks);
            assert!(is_graded_compatible(&t.base_point(), &t, None).unwrap());
        }
        let t = TorusData::new(vec![2]);
        assert!(!is_graded_compatible(&Point::origin(2), &t, None).unwrap());
        let shifted = t.base_point().add(&[q(1, 3), q(1, 3)]);
        assert!(is_graded_compatible(&shifted, &t, None).unwrap());
    }

    #[test]
    fn diagonalizer_of_gl2() {
        let t = TorusData::new(vec![2]);
        let d = w_diagonalizer(&t);
        assert_eq!(&d.g * &d.g_inv, LoopMatrix::identity(2));
        let w = t.block_power(0, 1);
        let diag = &(&d.g_inv * &w) * &d.g;
        let u = PuiseuxSeries::monomial(c(1), 1, 2);
        assert_eq!(diag.get(0, 0), &u);
        assert_eq!(diag.get(1, 1), &(-&u));
        assert!(diag.get(0, 1).is_exact_zero());
        // g^{-1} sigma(g) is a permutation matrix of a 2-cycle
        let n0 = &d.g_inv * &d.g.galois();
        assert_eq!(n0, LoopMatrix::constant(2, &[c(0), c(1), c(1), c(0)]));
    }

    #[test]
    fn compatibility_witness_for_the_half_point() {
        let t = TorusData::new(vec![2]);
        let y = Point::new(vec![q(1, 2), qi(0)]);
        let v = compatibility_witness(&y, &t).unwrap();
        let moved = v.act(&y);
        let base = t.base_point();
        assert_eq!(&moved.coords()[0] - &base.coords()[0], &moved.coords()[1] - &base.coords()[1]);
        assert!(compatibility_witness(&Point::origin(2), &t).is_none());
    }

    #[test]
    fn graded_conjugator_of_a_positive_exponential() {
        let t = TorusData::new(vec![2]);
        let x = t.base_point();
        // X = E12 z of grade 3/2
        let xm = LoopMatrix::elementary(2, 0, 1, c(1), 1, 1);
        let q0 = exp_homogeneous(&xm, &q(3, 2), &x, &qi(8));
        let out = graded_conjugator(&q0, &t, &x, &qi(4)).unwrap();
        let conj = Conjugate { q: &out.cartan_conjugator, q_inv: &out.cartan_conjugator_inv };
        assert!(is_graded_compatible(&x, &t, Some(conj)).unwrap());
        let origin = Point::origin(2);
        assert!(graded_conjugator(&q0, &t, &origin, &qi(4)).is_err());
        let _ = Dense::identity(1);
    }

    proptest! {
        #[test]
        fn permutation_conjugates_follow_weyl_membership(a in -5i64..6, b in -5i64..6) {
            let t = TorusData::new(vec![2]);
            let y = Point::new(vec![qi(0), q(a, 4) + q(b, 4) - q(b, 4)]);
            let witness = compatibility_witness(&y, &t);
            let mut brute = false;
            for perm in [vec![0usize, 1], vec![1, 0]] {
                for m0 in -2i64..3 {
                    for m1 in -2i64..3 {
                        let v = AffineWeyl::new(vec![m0, m1], perm.clone());
                        let qm = v.inverse().representative();
                        let qi_ = v.representative();
                        if is_graded_compatible(&y, &t, Some(Conjugate { q: &qm, q_inv: &qi_ })).unwrap() {
                            brute = true;
                        }
                    }
                }
            }
            prop_assert_eq!(witness.is_some(), brute);
        }
    }
}

//! Formal types, the relative affine Weyl group acting on them, and the
//! orbit test that classifies connections with regular strata.
//!
//! A formal type of depth `r` for a block-Coxeter torus is the matrix
//! `A~ = sum a_{j,k} w_j^k` over the keys with `-r <= k/e_j <= 0`; the key `k`
//! of block `j` sits at grade `k/e_j` at the torus base point. The group acts
//! by `n . A = pi_s(n A~ n^{-1} - tau(n) n^{-1})` truncated to grades `<= 0`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::apartment::Point;
use crate::error::{Error, Result};
use crate::reduce::{gauge, reduce_to_formal_type, GaugeElement, ReductionResult};
use crate::scalars::{is_integer, q, qi, to_i64, Cyclotomic, LoopMatrix, Precision, PuiseuxSeries, Q};
use crate::strata::{is_regular_stratum, Connection, Stratum};
use crate::torus::{for_each_permutation, pi_s, SElement, TorusData};

/// Formal type over a block-Coxeter torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalType {
    torus: TorusData,
    depth: Q,
    /// Per block, key `k` (grade `k/e_j`) to a nonzero coefficient.
    coeffs: Vec<BTreeMap<i64, Cyclotomic>>,
}

impl FormalType {
    /// Checks only the shape: keys lie in `[-r e_j, 0]`. Zero coefficients are dropped.
    pub fn new(torus: TorusData, depth: Q, mut coeffs: Vec<BTreeMap<i64, Cyclotomic>>) -> Result<Self> {
        if depth < Q::zero() {
            return Err(Error::InvalidFormalType(format!("negative depth {depth}")));
        }
        if coeffs.len() != torus.blocks().len() {
            return Err(Error::InvalidFormalType(format!(
                "{} coefficient blocks for torus {torus}",
                coeffs.len()
            )));
        }
        for (j, terms) in coeffs.iter_mut().enumerate() {
            terms.retain(|_, c| !c.is_zero());
            let e = torus.blocks()[j] as i64;
            for k in terms.keys() {
                let g = q(*k, e);
                if g > Q::zero() || g < -depth.clone() {
                    return Err(Error::InvalidFormalType(format!(
                        "block {} grade {g} lies outside [-{depth}, 0]",
                        j + 1
                    )));
                }
            }
        }
        Ok(FormalType { torus, depth, coeffs })
    }

    /// From `(block, grade, coefficient)` triples; grades must be multiples of `1/e_j`.
    pub fn from_terms<I: IntoIterator<Item = (usize, Q, Cyclotomic)>>(torus: TorusData, depth: Q, terms: I) -> Result<Self> {
        let mut coeffs = vec![BTreeMap::new(); torus.blocks().len()];
        for (j, g, c) in terms {
            let Some(&e) = torus.blocks().get(j) else {
                return Err(Error::InvalidFormalType(format!("block {} out of range", j + 1)));
            };
            let k = &g * qi(e as i64);
            if !is_integer(&k) {
                return Err(Error::InvalidFormalType(format!("grade {g} is not a multiple of 1/{e}")));
            }
            let slot: &mut BTreeMap<i64, Cyclotomic> = &mut coeffs[j];
            let k = to_i64(&k).ok_or_else(|| Error::InvalidFormalType(String::from("grade too large")))?;
            let sum = slot.get(&k).map_or(c.clone(), |old| old + &c);
            slot.insert(k, sum);
        }
        Self::new(torus, depth, coeffs)
    }

    /// Class of a Cartan element: grades above zero are dropped; grades below
    /// `-r` are an error.
    pub fn from_cartan(torus: TorusData, depth: Q, s: &SElement) -> Result<Self> {
        let coeffs = s
            .coeffs
            .iter()
            .map(|terms| terms.iter().filter(|(k, _)| **k <= 0).map(|(k, c)| (*k, c.clone())).collect())
            .collect();
        Self::new(torus, depth, coeffs)
    }

    pub fn torus(&self) -> &TorusData {
        &self.torus
    }

    pub fn depth(&self) -> &Q {
        &self.depth
    }

    pub fn coeffs(&self) -> &[BTreeMap<i64, Cyclotomic>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize, k: i64) -> Cyclotomic {
        self.coeffs[j].get(&k).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    /// Coefficient of `w_j^0`, the residue on block `j` up to the factor `1/e_j`.
    pub fn residue(&self, j: usize) -> Cyclotomic {
        self.coeff(j, 0)
    }

    /// `(block, grade, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Q, &Cyclotomic)> + '_ {
        self.coeffs.iter().enumerate().flat_map(move |(j, terms)| {
            let e = self.torus.blocks()[j] as i64;
            terms.iter().map(move |(k, c)| (j, q(*k, e), c))
        })
    }

    /// The canonical lift `A~` in the Cartan.
    pub fn matrix(&self) -> LoopMatrix {
        SElement { coeffs: self.coeffs.clone(), prec: vec![Precision::Exact; self.coeffs.len()] }.to_matrix(&self.torus)
    }

    /// The grade `-r` part of `A~`.
    pub fn leading_matrix(&self) -> LoopMatrix {
        let n = self.torus.n();
        let mut acc = LoopMatrix::zeros(n, 1, Precision::Exact);
        for (j, terms) in self.coeffs.iter().enumerate() {
            let k = -&self.depth * qi(self.torus.blocks()[j] as i64);
            if let Some(c) = to_i64(&k).filter(|_| is_integer(&k)).and_then(|k| terms.get(&k).map(|c| (k, c))) {
                acc = &acc + &self.torus.block_power(j, c.0).scale(c.1);
            }
        }
        acc
    }

    /// TOML-compatible canonical serialization, with 1-based blocks.
    pub fn to_canonical(&self) -> String {
        let blocks: Vec<String> = self.torus.blocks().iter().map(|e| format!("{e}")).collect();
        let mut out = format!("torus = [{}]\ndepth = \"{}\"\n", blocks.join(", "), self.depth);
        for (j, g, c) in self.terms() {
            out.push_str(&format!("\n[[coeff]]\nblock = {}\ngrade = \"{g}\"\nvalue = \"{c}\"\n", j + 1));
        }
        out
    }
}

impl fmt::Display for FormalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} depth {}:", self.torus, self.depth)?;
        let mut any = false;
        for (j, g, c) in self.terms() {
            write!(f, " w{}[{g}]={c}", j + 1)?;
            any = true;
        }
        if !any {
            f.write_str(" 0")?;
        }
        Ok(())
    }
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub valid: bool,
    pub diagnosis: Option<String>,
    /// Depth zero only: roots `(i, j)`, `i < j`, with `a_i - a_j = x_i - x_j` at the queried point.
    pub excluded_roots: Vec<(usize, usize)>,
}

impl Validation {
    fn fail(msg: String) -> Self {
        Validation { valid: false, diagnosis: Some(msg), excluded_roots: Vec::new() }
    }
}

/// Positive depth: the leading term is a regular stratum at the base point.
/// Depth zero: the torus is split and no two residues differ by an integer.
pub fn validate(a: &FormalType, point: Option<&Point>) -> Validation {
    let torus = &a.torus;
    let n = torus.n();
    if a.depth.is_zero() {
        if !torus.is_split() {
            return Validation::fail(format!("depth-zero formal types live on the split torus, not {torus}"));
        }
        let res: Vec<Cyclotomic> = (0..n).map(|j| a.residue(j)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let d = &res[i] - &res[j];
                if d.as_rational().is_some_and(is_integer) {
                    return Validation::fail(format!("residues {} and {} differ by the integer {d}", i + 1, j + 1));
                }
            }
        }
        let mut excluded = Vec::new();
        if let Some(x) = point {
            if x.n() == n {
                for i in 0..n {
                    for j in i + 1..n {
                        if &res[i] - &res[j] == Cyclotomic::from_q(x.root_value(i, j)) {
                            excluded.push((i, j));
                        }
                    }
                }
            }
        }
        return Validation { valid: true, diagnosis: None, excluded_roots: excluded };
    }
    let lead = a.leading_matrix();
    if lead.is_zero_to_precision() {
        return Validation::fail(format!("no coefficient at grade -{}", a.depth));
    }
    let st = match Stratum::new(torus.base_point(), a.depth.clone(), lead) {
        Ok(st) => st,
        Err(e) => return Validation::fail(format!("{e}")),
    };
    match is_regular_stratum(&st) {
        Ok(Some(_)) => Validation { valid: true, diagnosis: None, excluded_roots: Vec::new() },
        Ok(None) => Validation::fail(format!("leading term at grade -{} is not regular", a.depth)),
        Err(e) => Validation::fail(format!("{e}")),
    }
}

/// Generators of the relative affine Weyl group, 0-based blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `d_j^p` with `d_j = diag(1, zeta, ..., zeta^{e_j - 1})`, `zeta = zeta_{e_j}`.
    Twist { block: usize, power: i64 },
    /// `w_j^p` on block `j`, identity on the others.
    Uniformizer { block: usize, power: i64 },
    /// Exchange of two blocks of equal size.
    Swap { a: usize, b: usize },
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Twist { block, power } => write!(f, "d{}^{power}", block + 1),
            Generator::Uniformizer { block, power } => write!(f, "w{}^{power}", block + 1),
            Generator::Swap { a, b } => write!(f, "s{},{}", a + 1, b + 1),
        }
    }
}

/// A word `g_1 ... g_m` in the generators with its normalizer matrix. As a
/// transformation `g_m` acts first.
#[derive(Clone, Debug)]
pub struct RelWeylElt {
    torus: TorusData,
    word: Vec<Generator>,
    matrix: LoopMatrix,
    inverse: LoopMatrix,
}

impl RelWeylElt {
    pub fn identity(torus: &TorusData) -> Self {
        RelWeylElt {
            torus: torus.clone(),
            word: Vec::new(),
            matrix: LoopMatrix::identity(torus.n()),
            inverse: LoopMatrix::identity(torus.n()),
        }
    }

    pub fn new(torus: &TorusData, word: Vec<Generator>) -> Result<Self> {
        let mut out = Self::identity(torus);
        for g in &word {
            let (m, m_inv) = generator_matrix(torus, g)?;
            out.matrix = &out.matrix * &m;
            out.inverse = &m_inv * &out.inverse;
        }
        out.word = word;
        Ok(out)
    }

    pub fn torus(&self) -> &TorusData {
        &self.torus
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    pub fn matrix(&self) -> &LoopMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &LoopMatrix {
        &self.inverse
    }

    pub fn gauge_element(&self) -> GaugeElement {
        GaugeElement::from_parts(self.matrix.clone(), self.inverse.clone())
    }

    /// The product `self * other`.
    pub fn compose(&self, other: &RelWeylElt) -> RelWeylElt {
        let mut word = self.word.clone();
        word.extend(other.word.iter().copied());
        RelWeylElt {
            torus: self.torus.clone(),
            word,
            matrix: &self.matrix * &other.matrix,
            inverse: &other.inverse * &self.inverse,
        }
    }
}

impl fmt::Display for RelWeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("identity");
        }
        for (i, g) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

fn generator_matrix(torus: &TorusData, g: &Generator) -> Result<(LoopMatrix, LoopMatrix)> {
    let blocks = torus.blocks();
    let n = torus.n();
    let check = |j: usize| {
        if j < blocks.len() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("block {} out of range for {torus}", j + 1)))
        }
    };
    match *g {
        Generator::Twist { block, power } => {
            check(block)?;
            let e = blocks[block] as u32;
            let off = torus.offset(block);
            let diag = |sign: i64| {
                let v: Vec<Cyclotomic> = (0..n)
                    .map(|i| {
                        if i >= off && i < off + e as usize {
                            Cyclotomic::zeta_pow(e, sign * power * (i - off) as i64)
                        } else {
                            Cyclotomic::one()
                        }
                    })
                    .collect();
                LoopMatrix::diagonal(&v)
            };
            Ok((diag(1), diag(-1)))
        }
        Generator::Uniformizer { block, power } => {
            check(block)?;
            Ok((torus.uniformizer_group(block, power), torus.uniformizer_group(block, -power)))
        }
        Generator::Swap { a, b } => {
            check(a)?;
            check(b)?;
            if blocks[a] != blocks[b] {
                return Err(Error::Invalid(format!("blocks {} and {} differ in size", a + 1, b + 1)));
            }
            let (oa, ob) = (torus.offset(a), torus.offset(b));
            let mut perm: Vec<usize> = (0..n).collect();
            if a != b {
                for i in 0..blocks[a] {
                    perm.swap(oa + i, ob + i);
                }
            }
            let m = LoopMatrix::from_fn(n, |i, j| {
                if perm[j] == i {
                    PuiseuxSeries::constant(Cyclotomic::one())
                } else {
                    PuiseuxSeries::exact_zero()
                }
            });
            // a product of disjoint transpositions is an involution
            Ok((m.clone(), m))
        }
    }
}

fn act_generator(g: &Generator, a: &mut FormalType) {
    match *g {
        Generator::Twist { block, power } => {
            let e = a.torus.blocks()[block] as u32;
            for (k, c) in a.coeffs[block].iter_mut() {
                *c = &*c * &Cyclotomic::zeta_pow(e, -power * k);
            }
        }
        Generator::Uniformizer { block, power } => {
            let e = a.torus.blocks()[block] as i64;
            let shifted = &a.residue(block) - &Cyclotomic::from_q(q(power, e));
            if shifted.is_zero() {
                a.coeffs[block].remove(&0);
            } else {
                a.coeffs[block].insert(0, shifted);
            }
        }
        Generator::Swap { a: i, b: j } => a.coeffs.swap(i, j),
    }
}

/// Closed form of the action: twists scale key `k` by `zeta_{e_j}^{-pk}`,
/// `w_j^p` lowers the block-`j` residue coefficient by `p/e_j`, swaps
/// exchange blocks.
pub fn rho_act(n: &RelWeylElt, a: &FormalType) -> Result<FormalType> {
    if n.torus != a.torus {
        return Err(Error::Mismatch(format!("element of the group for {} acting on {}", n.torus, a.torus)));
    }
    let mut out = a.clone();
    for g in n.word.iter().rev() {
        act_generator(g, &mut out);
    }
    Ok(out)
}

/// The action computed from matrices: `pi_s(gauge(n, A~))` truncated to grades `<= 0`.
pub fn rho_act_matrix(n: &RelWeylElt, a: &FormalType) -> Result<FormalType> {
    if n.torus != a.torus {
        return Err(Error::Mismatch(format!("element of the group for {} acting on {}", n.torus, a.torus)));
    }
    let moved = gauge(&n.gauge_element(), &Connection::new(a.matrix()));
    FormalType::from_cartan(a.torus.clone(), a.depth.clone(), &pi_s(&a.torus, moved.matrix())?)
}

/// Searches for `n` with `rho_act(n, a1) = a2`: twists and block
/// permutations are enumerated, then residues are matched by uniformizer
/// powers block by block.
pub fn orbit_equivalent(a1: &FormalType, a2: &FormalType) -> Option<RelWeylElt> {
    if a1.torus != a2.torus || a1.depth != a2.depth {
        return None;
    }
    let torus = &a1.torus;
    let blocks = torus.blocks();
    let m = blocks.len();
    let mut found = None;
    let mut twist = vec![0i64; m];
    loop {
        let twist_word: Vec<Generator> = twist
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != 0)
            .map(|(j, p)| Generator::Twist { block: j, power: *p })
            .collect();
        let mut twisted = a1.clone();
        for g in twist_word.iter().rev() {
            act_generator(g, &mut twisted);
        }
        for_each_permutation(m, &mut |perm: &[usize]| {
            if (0..m).any(|i| blocks[perm[i]] != blocks[i]) {
                return false;
            }
            let swaps = swaps_for(perm);
            let mut cand = twisted.clone();
            for g in &swaps {
                act_generator(g, &mut cand);
            }
            let Some(shifts) = residue_shifts(&cand, a2) else {
                return false;
            };
            let mut word: Vec<Generator> = shifts
                .iter()
                .enumerate()
                .filter(|(_, p)| **p != 0)
                .map(|(j, p)| Generator::Uniformizer { block: j, power: *p })
                .collect();
            word.extend(swaps.iter().rev().copied());
            word.extend(twist_word.iter().copied());
            found = RelWeylElt::new(torus, word).ok();
            true
        });
        if found.is_some() {
            return found;
        }
        // next twist tuple
        let mut j = 0;
        while j < m {
            twist[j] += 1;
            if twist[j] < blocks[j] as i64 {
                break;
            }
            twist[j] = 0;
            j += 1;
        }
        if j == m {
            return None;
        }
    }
}

/// Swaps, in application order, moving block `perm[i]` into slot `i`.
fn swaps_for(perm: &[usize]) -> Vec<Generator> {
    let mut cur: Vec<usize> = (0..perm.len()).collect();
    let mut out = Vec::new();
    for i in 0..perm.len() {
        if cur[i] != perm[i] {
            let k = (i + 1..perm.len()).find(|&k| cur[k] == perm[i]).expect("perm is a permutation");
            cur.swap(i, k);
            out.push(Generator::Swap { a: i, b: k });
        }
    }
    out
}

/// Powers `p_j` with `rho(w^p)(cand) = target`, when all negative grades agree
/// and residue differences lie in `(1/e_j) Z`.
fn residue_shifts(cand: &FormalType, target: &FormalType) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(cand.coeffs.len());
    for (j, &e) in cand.torus.blocks().iter().enumerate() {
        let strip = |t: &BTreeMap<i64, Cyclotomic>| -> Vec<(i64, Cyclotomic)> {
            t.iter().filter(|(k, _)| **k != 0).map(|(k, c)| (*k, c.clone())).collect()
        };
        if strip(&cand.coeffs[j]) != strip(&target.coeffs[j]) {
            return None;
        }
        let diff = &cand.residue(j) - &target.residue(j);
        let p = diff.as_rational()? * qi(e as i64);
        if !is_integer(&p) {
            return None;
        }
        out.push(to_i64(&p)?);
    }
    Some(out)
}

/// The connection with matrix `A~`.
pub fn realize(a: &FormalType) -> Result<Connection> {
    let v = validate(a, None);
    if !v.valid {
        return Err(Error::InvalidFormalType(v.diagnosis.unwrap_or_default()));
    }
    Ok(Connection::new(a.matrix()))
}

/// Explicit isomorphism `realize(a) -> realize(rho_act(n, a))`: the gauge
/// `p n`, where `p` reduces `gauge(n, A~)` back into the Cartan.
#[derive(Clone, Debug)]
pub struct OrbitGauge {
    pub gauge: GaugeElement,
    pub target: FormalType,
    pub reduction: ReductionResult,
    /// `gauge(p n, A~_1) - A~_2`; vanishes to its precision.
    pub certificate: LoopMatrix,
}

pub fn orbit_gauge(n: &RelWeylElt, a: &FormalType, bound: &Q) -> Result<OrbitGauge> {
    let start = realize(a)?;
    let target = rho_act(n, a)?;
    let moved = gauge(&n.gauge_element(), &start);
    let reduction = reduce_to_formal_type(&moved, &a.torus, None, bound)?;
    if reduction.formal_type != target {
        return Err(Error::Mismatch(format!("reduction gave {} instead of {target}", reduction.formal_type)));
    }
    let total = reduction.p.compose(&n.gauge_element());
    let image = gauge(&total, &start);
    let certificate = image.matrix() - &target.matrix();
    if !certificate.is_zero_to_precision() {
        return Err(Error::NoSolution(String::from("orbit gauge certificate does not vanish")));
    }
    Ok(OrbitGauge { gauge: total, target, reduction, certificate })
}

/// Number of elements of the finite part enumerated by [`orbit_equivalent`].
pub fn finite_part_order(torus: &TorusData) -> u64 {
    let mut order: u64 = torus.blocks().iter().map(|&e| e as u64).product();
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for &e in torus.blocks() {
        *counts.entry(e).or_default() += 1;
    }
    for c in counts.values() {
        order *= (1..=*c).product::<u64>();
    }
    order
}

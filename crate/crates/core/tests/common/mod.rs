//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use loopstrata::apartment::Point;
use loopstrata::formaltype::{validate, FormalType, Generator, RelWeylElt};
use loopstrata::reduce::GaugeElement;
use loopstrata::scalars::linalg::Dense;
use loopstrata::scalars::{gcd_i64, q, qi, Precision};
use loopstrata::torus::TorusData;
use loopstrata::{Cyclotomic, LoopMatrix, Q};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with numerator in `[-4, 4]` and denominator in `1..=3`.
pub fn nonzero_q<R: Rng>(rng: &mut R) -> Q {
    loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            return q(n, rng.gen_range(1..=3));
        }
    }
}

/// Nonzero scalar, occasionally outside `Q` (a multiple of a root of unity of order `e`).
pub fn nonzero_scalar<R: Rng>(rng: &mut R, e: usize) -> Cyclotomic {
    let c = Cyclotomic::from_q(nonzero_q(rng));
    if e > 1 && rng.gen_bool(0.2) {
        &c * &Cyclotomic::zeta_pow(e as u32, rng.gen_range(1..e as i64))
    } else {
        c
    }
}

pub fn elementary(n: usize, i: usize, j: usize, c: Cyclotomic, k: i64) -> LoopMatrix {
    LoopMatrix::elementary(n, i, j, c, k, 1)
}

pub fn zero(n: usize) -> LoopMatrix {
    LoopMatrix::zeros(n, 1, Precision::Exact)
}

/// A depth admissible for the regular tori used in the tests: `m/e` with
/// `gcd(m, e) = 1` for the largest block `e`, or a positive integer when split.
pub fn random_depth<R: Rng>(rng: &mut R, torus: &TorusData) -> Q {
    let e = *torus.blocks().iter().max().unwrap() as i64;
    loop {
        let m = rng.gen_range(1..=2 * e);
        if gcd_i64(m, e) == 1 {
            return q(m, e);
        }
    }
}

/// Random formal type of depth `r`, resampled until it validates.
pub fn random_formal_type<R: Rng>(rng: &mut R, torus: &TorusData, r: &Q) -> FormalType {
    for _ in 0..1000 {
        let mut coeffs = Vec::new();
        for &e in torus.blocks() {
            let lowest = (-r * qi(e as i64)).ceil().to_integer();
            let lowest = i64::try_from(lowest).unwrap();
            let mut terms = BTreeMap::new();
            for k in lowest..=0 {
                let leading = q(k, e as i64) == -r.clone();
                if leading || rng.gen_bool(0.5) {
                    let c = if k == 0 && *r == qi(0) {
                        Cyclotomic::from_q(q(rng.gen_range(-9i64..=9), rng.gen_range(2..=5)))
                    } else {
                        nonzero_scalar(rng, e)
                    };
                    terms.insert(k, c);
                }
            }
            coeffs.push(terms);
        }
        let a = FormalType::new(torus.clone(), r.clone(), coeffs).unwrap();
        if validate(&a, None).valid {
            return a;
        }
    }
    panic!("no valid formal type found for {torus} at depth {r}");
}

/// Tori of type `[n]`, `[n-1, 1]` and `[2, 2]` for `n <= 4`.
pub fn regular_tori() -> Vec<TorusData> {
    vec![
        TorusData::new(vec![2]),
        TorusData::new(vec![3]),
        TorusData::new(vec![4]),
        TorusData::new(vec![2, 1]),
        TorusData::new(vec![3, 1]),
        TorusData::new(vec![2, 2]),
    ]
}

/// Random `E_ij z^m` terms of grade in `(lo, hi]` at `x`, with integer exponents.
pub fn random_homogeneous_terms<R: Rng>(rng: &mut R, x: &Point, lo: &Q, hi: &Q, count: usize) -> LoopMatrix {
    let n = x.n();
    let mut acc = zero(n);
    let mut placed = 0;
    while placed < count {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let root = x.root_value(i, j);
        // smallest integer m with m + root > lo
        let m0 = (lo - &root).floor().to_integer() + 1;
        let m = i64::try_from(m0).unwrap() + rng.gen_range(0..=1);
        if &(qi(m) + &root) > hi {
            continue;
        }
        acc = &acc + &elementary(n, i, j, Cyclotomic::from_q(nonzero_q(rng)), m);
        placed += 1;
    }
    acc
}

/// A single homogeneous element of grade `g` at `x` (possibly zero if no
/// entry has that grade).
pub fn random_homogeneous<R: Rng>(rng: &mut R, x: &Point, g: &Q) -> LoopMatrix {
    let n = x.n();
    let mut acc = zero(n);
    for i in 0..n {
        for j in 0..n {
            let m = g - &x.root_value(i, j);
            if m.is_integer() && rng.gen_bool(0.6) {
                let m = i64::try_from(m.to_integer()).unwrap();
                acc = &acc + &elementary(n, i, j, Cyclotomic::from_q(nonzero_q(rng)), m);
            }
        }
    }
    acc
}

/// Invertible constant matrix: a signed permutation times a unipotent
/// triangular factor with small entries.
pub fn random_constant<R: Rng>(rng: &mut R, n: usize) -> Dense {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut p = Dense::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, Cyclotomic::from_i64(if rng.gen_bool(0.5) { 1 } else { -2 }));
    }
    let mut u = Dense::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            u.set(i, j, Cyclotomic::from_i64(rng.gen_range(-2..=2)));
        }
    }
    p.mul(&u)
}

/// Product of constants, shears and exponentials of positive-grade elements
/// at the origin, truncated below `prec`.
pub fn random_gauge<R: Rng>(rng: &mut R, n: usize, prec: &Q) -> GaugeElement {
    let origin = Point::origin(n);
    let mut g = GaugeElement::identity(n);
    for _ in 0..rng.gen_range(1..=3) {
        let factor = match rng.gen_range(0..3) {
            0 => GaugeElement::constant(&random_constant(rng, n)).unwrap(),
            1 => {
                let mu: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
                GaugeElement::shear(&mu)
            }
            _ => {
                let grade = qi(rng.gen_range(1..=2));
                let x = random_homogeneous(rng, &origin, &grade);
                GaugeElement::exp(&x, &grade, &origin, prec)
            }
        };
        g = g.compose(&factor);
    }
    g
}

/// Random generator of the relative affine Weyl group of `torus`.
pub fn random_generator<R: Rng>(rng: &mut R, torus: &TorusData) -> Generator {
    let blocks = torus.blocks();
    let m = blocks.len();
    loop {
        let block = rng.gen_range(0..m);
        match rng.gen_range(0..3) {
            0 => return Generator::Twist { block, power: rng.gen_range(-3..=3) },
            1 => return Generator::Uniformizer { block, power: rng.gen_range(-2..=2) },
            _ => {
                let b = rng.gen_range(0..m);
                if b != block && blocks[b] == blocks[block] {
                    return Generator::Swap { a: block, b };
                }
            }
        }
    }
}

pub fn random_word<R: Rng>(rng: &mut R, torus: &TorusData, max_len: usize) -> RelWeylElt {
    let len = rng.gen_range(0..=max_len);
    let word = (0..len).map(|_| random_generator(rng, torus)).collect();
    RelWeylElt::new(torus, word).unwrap()
}

/// Every generator with power one, plus all swaps.
pub fn all_generators(torus: &TorusData) -> Vec<Generator> {
    let blocks = torus.blocks();
    let mut out = Vec::new();
    for block in 0..blocks.len() {
        out.push(Generator::Twist { block, power: 1 });
        out.push(Generator::Uniformizer { block, power: 1 });
        out.push(Generator::Uniformizer { block, power: -1 });
        for b in block + 1..blocks.len() {
            if blocks[b] == blocks[block] {
                out.push(Generator::Swap { a: block, b });
            }
        }
    }
    out
}

/// Random point with coordinates of denominator at most 4 in `[-1, 1]`.
pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Point {
    Point::new(
        (0..n)
            .map(|_| {
                let d = rng.gen_range(1..=4);
                q(rng.gen_range(-d..=d), d)
            })
            .collect(),
    )
}

/// Random exact matrix with integer exponents in `[-2, 2]`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, terms: usize) -> LoopMatrix {
    let mut acc = zero(n);
    for _ in 0..terms {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        acc = &acc + &elementary(n, i, j, Cyclotomic::from_q(nonzero_q(rng)), rng.gen_range(-2..=2));
    }
    acc
}

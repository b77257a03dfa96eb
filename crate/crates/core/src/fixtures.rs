//! Worked examples and random instance generators.
//!
//! Variables are written 1-based here (`b1`, `a1`) to match the usual
//! notation; internally they are `VarId::orig(0)`, `VarId::aux(0)`.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::poly::{truth_table_to_multilinear, Monomial, Polynomial, VarId};
use crate::quad4::{Coeffs4, Lemma};
use crate::quadratization::{Component, Quadratization, Step, Tolerance};

fn b(i: u32) -> VarId {
    VarId::orig(i - 1)
}

fn a(i: u32) -> VarId {
    VarId::aux(i - 1)
}

/// `terms` over originals plus `aux_terms`, each multiplied by `aux`.
pub fn with_aux(terms: &[(f64, &[u32])], aux: VarId, aux_terms: &[(f64, &[u32])]) -> Polynomial {
    let mut p = Polynomial::from_indexed(terms);
    for (c, ix) in aux_terms {
        p.add_term(Monomial::new(ix.iter().map(|&i| b(i)).chain([aux])), *c);
    }
    p
}

/// 11 terms on 8 variables: two disjoint quartic blocks plus `b1b8`.
pub fn example_a() -> Polynomial {
    Polynomial::from_indexed(&[
        (1.0, &[1, 2, 3, 4]),
        (1.0, &[1, 2, 3]),
        (1.0, &[1, 2, 4]),
        (2.0, &[1, 3, 4]),
        (3.0, &[2, 3, 4]),
        (-1.0, &[5, 6, 7, 8]),
        (-2.0, &[5, 6, 7]),
        (-3.0, &[5, 6, 8]),
        (-4.0, &[5, 7, 8]),
        (-5.0, &[6, 7, 8]),
        (1.0, &[1, 8]),
    ])
}

/// Chain of `n` quartic blocks on `4n` variables.
///
/// Block `k` is `2 b_{4k-3}b_{4k-2}b_{4k-1}b_{4k} - b_{4k-3}b_{4k-2}b_{4k}`,
/// except the last block whose cubic is `b_{4k-2}b_{4k-1}b_{4k}`; neighbours
/// are linked by `-b_{4k} b_{4k+1}`.
pub fn example_b(n: u32) -> Polynomial {
    let mut p = Polynomial::new();
    for k in 1..=n {
        let s = 4 * k - 3;
        p.add_term(Monomial::of(&[s, s + 1, s + 2, s + 3]), 2.0);
        if k < n {
            p.add_term(Monomial::of(&[s, s + 1, s + 3]), -1.0);
            p.add_term(Monomial::of(&[s + 3, s + 4]), -1.0);
        } else {
            p.add_term(Monomial::of(&[s + 1, s + 2, s + 3]), -1.0);
        }
    }
    p
}

/// 12 terms on 5 variables, all cubic or quartic.
pub fn example_c() -> Polynomial {
    Polynomial::from_indexed(&[
        (5.0, &[1, 2, 3, 4]),
        (4.0, &[1, 2, 3, 5]),
        (3.0, &[1, 2, 4, 5]),
        (-3.0, &[1, 2, 3]),
        (-1.0, &[1, 2, 4]),
        (-5.0, &[1, 2, 5]),
        (-1.0, &[1, 3, 4]),
        (-1.0, &[1, 3, 5]),
        (-1.0, &[1, 4, 5]),
        (-2.0, &[2, 3, 4]),
        (-1.0, &[2, 3, 5]),
        (-4.0, &[2, 4, 5]),
    ])
}

/// All 15 cubic and quartic monomials on 5 variables.
pub fn example_d() -> Polynomial {
    let mut p = example_c();
    p.add_term(Monomial::of(&[3, 4, 5]), -3.0);
    p.add_term(Monomial::of(&[1, 3, 4, 5]), 2.0);
    p.add_term(Monomial::of(&[2, 3, 4, 5]), 1.0);
    p
}

/// `atan(b1 + b2) * exp(min(b2, b3)) * sqrt(5 b4)`.
pub fn example_e_function(x: [bool; 4]) -> f64 {
    let v = |k: usize| x[k] as u8 as f64;
    (v(0) + v(1)).atan() * v(1).min(v(2)).exp() * (5.0 * v(3)).sqrt()
}

pub fn example_e_table() -> Vec<f64> {
    (0..16usize)
        .map(|m| example_e_function(std::array::from_fn(|k| m >> k & 1 == 1)))
        .collect()
}

pub fn example_e() -> Polynomial {
    truth_table_to_multilinear(&example_e_table(), 4).expect("16 values")
}

/// Closed form of the example E coefficients:
/// `(b1b4, b2b4, b1b2b4, b2b3b4, b1b2b3b4)`.
pub fn example_e_closed_form() -> [f64; 5] {
    let r5 = 5f64.sqrt();
    let at2 = 2f64.atan();
    [
        r5 * PI / 4.0,
        r5 * PI / 4.0,
        r5 * (at2 - PI / 2.0),
        r5 * PI / 4.0 * (E - 1.0),
        r5 * (E - 1.0) * (at2 - PI / 4.0),
    ]
}

/// Every coefficient rounded to 2 decimals.
pub fn round2(p: &Polynomial) -> Polynomial {
    Polynomial::from_terms(p.terms().map(|(m, c)| (m.clone(), (c * 100.0).round() / 100.0)))
}

/// A worked group: its function, its printed output (in the example's own
/// variables, auxiliary `aux`), and the lemma the text attributes to it.
#[derive(Clone, Debug)]
pub struct GroupFixture {
    pub name: &'static str,
    pub function: Polynomial,
    pub aux: VarId,
    pub expected: Polynomial,
    pub prefer: Option<Lemma>,
}

pub fn example_a_groups() -> Vec<GroupFixture> {
    vec![
        GroupFixture {
            name: "A blue",
            function: Polynomial::from_indexed(&[
                (1.0, &[1, 2, 3, 4]),
                (1.0, &[1, 2, 3]),
                (1.0, &[1, 2, 4]),
                (2.0, &[1, 3, 4]),
                (3.0, &[2, 3, 4]),
            ]),
            aux: a(1),
            expected: with_aux(
                &[
                    (3.0, &[1, 2]),
                    (4.0, &[1, 3]),
                    (4.0, &[1, 4]),
                    (5.0, &[2, 3]),
                    (5.0, &[2, 4]),
                    (6.0, &[3, 4]),
                ],
                a(1),
                &[(10.0, &[]), (-6.0, &[1]), (-7.0, &[2]), (-8.0, &[3]), (-8.0, &[4])],
            ),
            prefer: None,
        },
        GroupFixture {
            name: "A red",
            function: Polynomial::from_indexed(&[
                (-1.0, &[5, 6, 7, 8]),
                (-2.0, &[5, 6, 7]),
                (-3.0, &[5, 6, 8]),
                (-4.0, &[5, 7, 8]),
                (-5.0, &[6, 7, 8]),
            ]),
            aux: a(2),
            // +a2(31 - 10b5 - 11b6 - 12b7 - 13b8); the overall minus form is not perfect
            expected: with_aux(
                &[],
                a(2),
                &[(31.0, &[]), (-10.0, &[5]), (-11.0, &[6]), (-12.0, &[7]), (-13.0, &[8])],
            ),
            prefer: None,
        },
    ]
}

fn blue(aux: VarId) -> GroupFixture {
    GroupFixture {
        name: "blue",
        function: Polynomial::from_indexed(&[
            (5.0, &[1, 2, 3, 4]),
            (-3.0, &[1, 2, 3]),
            (-1.0, &[1, 2, 4]),
            (-1.0, &[1, 3, 4]),
            (-2.0, &[2, 3, 4]),
        ]),
        aux,
        expected: with_aux(
            &[(1.0, &[1, 2]), (1.0, &[1, 3]), (3.0, &[1, 4]), (2.0, &[2, 4]), (2.0, &[3, 4])],
            aux,
            &[(8.0, &[]), (-5.0, &[1]), (-4.0, &[2]), (-4.0, &[3]), (-6.0, &[4])],
        ),
        prefer: Some(Lemma::L1),
    }
}

fn b1235(aux: VarId) -> GroupFixture {
    GroupFixture {
        name: "1235",
        function: Polynomial::from_indexed(&[
            (4.0, &[1, 2, 3, 5]),
            (-5.0, &[1, 2, 5]),
            (-1.0, &[1, 3, 5]),
            (-1.0, &[2, 3, 5]),
        ]),
        aux,
        expected: with_aux(
            &[
                (3.0, &[]),
                (-3.0, &[1]),
                (6.0, &[2]),
                (-3.0, &[3]),
                (5.0, &[5]),
                (-5.0, &[1, 2]),
                (3.0, &[1, 3]),
                (-5.0, &[1, 5]),
                (-1.0, &[2, 3]),
                (-1.0, &[3, 5]),
            ],
            aux,
            &[(-3.0, &[]), (8.0, &[1]), (-6.0, &[2]), (4.0, &[3]), (-5.0, &[5])],
        ),
        prefer: Some(Lemma::L4),
    }
}

fn b1245(aux: VarId) -> GroupFixture {
    GroupFixture {
        name: "1245",
        function: Polynomial::from_indexed(&[
            (3.0, &[1, 2, 4, 5]),
            (-1.0, &[1, 4, 5]),
            (-4.0, &[2, 4, 5]),
        ]),
        aux,
        expected: with_aux(
            &[
                (1.0, &[1]),
                (4.0, &[2]),
                (3.0, &[1, 2]),
                (-1.0, &[1, 4]),
                (-1.0, &[1, 5]),
                (-4.0, &[2, 4]),
                (-4.0, &[2, 5]),
            ],
            aux,
            &[(3.0, &[]), (-4.0, &[1]), (-7.0, &[2]), (5.0, &[4]), (5.0, &[5])],
        ),
        prefer: Some(Lemma::L3),
    }
}

fn named(mut g: GroupFixture, name: &'static str) -> GroupFixture {
    g.name = name;
    g
}

pub fn example_c_groups() -> Vec<GroupFixture> {
    vec![
        named(blue(a(1)), "C blue"),
        named(b1235(a(2)), "C teal"),
        named(b1245(a(3)), "C red"),
    ]
}

pub fn example_d_groups() -> Vec<GroupFixture> {
    let teal = GroupFixture {
        name: "D teal",
        function: Polynomial::from_indexed(&[(2.0, &[1, 3, 4, 5]), (-3.0, &[3, 4, 5])]),
        aux: a(4),
        expected: with_aux(
            &[],
            a(4),
            &[(6.0, &[]), (2.0, &[1]), (-3.0, &[3]), (-3.0, &[4]), (-3.0, &[5])],
        ),
        prefer: None,
    };
    let orange = GroupFixture {
        name: "D orange",
        function: Polynomial::from_indexed(&[(1.0, &[2, 3, 4, 5])]),
        aux: a(5),
        expected: with_aux(
            &[
                (1.0, &[2, 3]),
                (1.0, &[2, 4]),
                (1.0, &[2, 5]),
                (1.0, &[3, 4]),
                (1.0, &[3, 5]),
                (1.0, &[4, 5]),
            ],
            a(5),
            &[(3.0, &[]), (-2.0, &[2]), (-2.0, &[3]), (-2.0, &[4]), (-2.0, &[5])],
        ),
        prefer: None,
    };
    vec![
        named(blue(a(1)), "D blue"),
        named(b1235(a(2)), "D red"),
        named(b1245(a(3)), "D violet"),
        teal,
        orange,
    ]
}

/// Lemma preferences keyed by group support, taken from a list of group
/// fixtures.
pub fn hints(groups: &[GroupFixture]) -> BTreeMap<Vec<VarId>, Lemma> {
    groups
        .iter()
        .filter_map(|g| {
            g.prefer
                .map(|l| (g.function.original_vars().into_iter().collect(), l))
        })
        .collect()
}

/// The pairwise-cover quadratization of [`example_d`] with
/// `a1 = b1b2, a2 = b1b3, a3 = b4b5, a4 = b2b3, a5 = b1b2b3`, entered by hand.
pub fn example_d_pairwise_cover() -> Quadratization {
    let t = |c: f64, vs: &[VarId]| (Monomial::new(vs.iter().copied()), c);
    let base = Polynomial::from_terms([
        t(-3.0, &[a(1), b(3)]),
        t(-1.0, &[a(1), b(4)]),
        t(-5.0, &[a(1), b(5)]),
        t(-1.0, &[a(2), b(4)]),
        t(-1.0, &[a(2), b(5)]),
        t(-1.0, &[b(1), a(3)]),
        t(-2.0, &[a(4), b(4)]),
        t(-1.0, &[a(4), b(5)]),
        t(-4.0, &[b(2), a(3)]),
        t(-3.0, &[b(3), a(3)]),
        t(5.0, &[a(5), b(4)]),
        t(4.0, &[a(5), b(5)]),
        t(3.0, &[a(1), a(3)]),
        t(2.0, &[a(2), a(3)]),
        t(1.0, &[a(4), a(3)]),
    ]);
    let pair = |w: f64, x: VarId, y: VarId, z: VarId| {
        Polynomial::from_terms([
            t(3.0 * w, &[z]),
            t(-2.0 * w, &[z, x]),
            t(-2.0 * w, &[z, y]),
            t(w, &[x, y]),
        ])
    };
    let triple = Polynomial::from_terms([
        t(45.0, &[a(5)]),
        t(-18.0, &[a(5), b(1)]),
        t(-18.0, &[a(5), b(2)]),
        t(-18.0, &[a(5), b(3)]),
        t(9.0, &[a(1), b(3)]),
    ]);
    let comps = [
        base,
        triple,
        pair(21.0, b(1), b(2), a(1)),
        pair(4.0, b(1), b(3), a(2)),
        pair(4.0, b(2), b(3), a(4)),
        pair(14.0, b(4), b(5), a(3)),
    ];
    let components = comps
        .into_iter()
        .map(|poly| Component {
            step: Step::Transcribed,
            poly,
        })
        .collect();
    Quadratization::assemble(
        Polynomial::new(),
        components,
        (1..=5).map(a).collect(),
        Tolerance::default(),
    )
}

/// Random polynomial of degree <= `max_degree` on `n` variables: each
/// monomial is present with probability `density`, coefficients uniform in
/// `[-10, 10]`.
pub fn random_polynomial(n: u32, max_degree: usize, density: f64, rng: &mut impl Rng) -> Polynomial {
    let mut p = Polynomial::new();
    for mask in 0u64..1 << n {
        if (mask.count_ones() as usize) > max_degree || !rng.gen_bool(density) {
            continue;
        }
        let m = Monomial::new((0..n).filter(|j| mask >> j & 1 == 1).map(VarId::orig));
        p.add_term(m, rng.gen_range(-10.0..=10.0));
    }
    p
}

/// [`random_polynomial`] from a seed.
pub fn seeded_polynomial(n: u32, max_degree: usize, density: f64, seed: u64) -> Polynomial {
    random_polynomial(n, max_degree, density, &mut StdRng::seed_from_u64(seed))
}

/// Uniform-ish draw from the stated region of `lemma`, components in `[-10, 10]`.
/// `L1` picks one of its three branches at random.
pub fn sample_region(lemma: Lemma, rng: &mut impl Rng) -> Coeffs4 {
    fn sorted3(lo: f64, hi: f64, rng: &mut impl Rng) -> [f64; 3] {
        let mut v = [0.0; 3].map(|_: f64| if lo < hi { rng.gen_range(lo..=hi) } else { lo });
        v.sort_by(f64::total_cmp);
        v
    }
    let big = rng.gen_range(0.0..=10.0);
    match lemma {
        Lemma::L1 => match rng.gen_range(0..3) {
            0 => {
                let c = [0.0; 4].map(|_: f64| rng.gen_range(-big / 2.0..=10.0));
                Coeffs4::new(big, c[0], c[1], c[2], c[3])
            }
            1 => {
                let x123 = rng.gen_range(-big..=-big / 2.0);
                let [x234, x134, x124] = sorted3(0.0, 10.0, rng);
                Coeffs4::new(big, x123, x124, x134, x234)
            }
            _ => loop {
                let x123 = rng.gen_range(-big..=-big / 2.0);
                let [x124, x134, x234] = sorted3(-big / 2.0, 0.0, rng);
                if x123 + x124 >= -big {
                    break Coeffs4::new(big, x123, x124, x134, x234);
                }
            },
        },
        Lemma::L2 => {
            let c = [0.0; 4].map(|_: f64| rng.gen_range(-10.0..=0.0));
            Coeffs4::new(-big, c[0], c[1], c[2], c[3])
        }
        Lemma::L3 => {
            let x123 = rng.gen_range(-10.0..=-big);
            let [x124, x134, _] = sorted3(-big / 2.0, 0.0, rng);
            let x234 = rng.gen_range(0.0..=10.0);
            Coeffs4::new(big, x123, x124, x134, x234)
        }
        Lemma::L4 => {
            let [x124, x134, x234] = sorted3(-big / 2.0, 0.0, rng);
            let x123 = rng.gen_range(-10.0..=-big - x124);
            Coeffs4::new(big, x123, x124, x134, x234)
        }
    }
}

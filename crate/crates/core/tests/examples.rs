use quadkit::fixtures::{self, GroupFixture};
use quadkit::partition::{group_terms, quadratize_n_with, QuadratizeOptions};
use quadkit::quad4::{quadratize_4var_with, Quad4Options};
use quadkit::{baselines, metrics, quadratize_n, verify_perfect, Monomial, Polynomial, Tolerance, VarId};

fn b(i: u32) -> VarId {
    VarId::orig(i - 1)
}

fn check_group(g: &GroupFixture) {
    let opts = Quad4Options {
        prefer: g.prefer,
        ..Default::default()
    };
    let q = quadratize_4var_with(&g.function, g.aux, &opts).unwrap();
    assert!(
        q.quadratic.approx_eq(&g.expected, 1e-9),
        "{}: got {} want {}",
        g.name,
        q.quadratic,
        g.expected
    );
    assert!(verify_perfect(&g.function, &g.expected, Tolerance::default()).unwrap().ok);
}

#[test]
fn example_a_groups_match() {
    for g in fixtures::example_a_groups() {
        check_group(&g);
    }
}

#[test]
fn example_c_groups_match() {
    for g in fixtures::example_c_groups() {
        check_group(&g);
    }
}

#[test]
fn example_d_groups_match() {
    for g in fixtures::example_d_groups() {
        check_group(&g);
    }
}

#[test]
fn example_a_grouping() {
    let (groups, residual) = group_terms(&fixtures::example_a()).unwrap();
    let supports: Vec<Vec<VarId>> = groups.iter().map(|g| g.support.clone()).collect();
    assert_eq!(
        supports,
        vec![vec![b(1), b(2), b(3), b(4)], vec![b(5), b(6), b(7), b(8)]]
    );
    assert_eq!(residual, Polynomial::from_indexed(&[(1.0, &[1, 8])]));
}

#[test]
fn example_c_grouping() {
    let (groups, residual) = group_terms(&fixtures::example_c()).unwrap();
    let supports: Vec<Vec<u32>> = groups
        .iter()
        .map(|g| g.support.iter().map(|v| v.index + 1).collect())
        .collect();
    assert_eq!(supports, vec![vec![1, 2, 3, 4], vec![1, 2, 3, 5], vec![1, 2, 4, 5]]);
    assert!(residual.is_empty());
}

#[test]
fn example_a_metrics() {
    let p = fixtures::example_a();
    let q = quadratize_n(&p).unwrap();
    assert!(verify_perfect(&p, &q.quadratic, Tolerance::default()).unwrap().ok);
    let m = metrics(&q);
    assert_eq!(m.aux_count, 2);
    assert_eq!(m.new_quadratic_terms, 14);
    assert_eq!((m.coeff_min, m.coeff_max), (-13.0, 31.0));
}

#[test]
fn example_a_rosenberg() {
    let p = fixtures::example_a();
    let pairs = [(b(1), b(2)), (b(3), b(4)), (b(5), b(6)), (b(7), b(8))];
    let q = baselines::rosenberg(&p, Some(&pairs)).unwrap();
    assert!(verify_perfect(&p, &q.quadratic, Tolerance::default()).unwrap().ok);
    let weights: Vec<f64> = q
        .components
        .iter()
        .filter_map(|c| match c.step {
            quadkit::Step::Substitution { weight, .. } => Some(weight),
            _ => None,
        })
        .collect();
    assert_eq!(weights, vec![3.0, 6.0, 6.0, 10.0]);
    let m = metrics(&q);
    assert_eq!(m.aux_count, 4);
    assert_eq!((m.coeff_min, m.coeff_max), (-20.0, 30.0));
}

fn example_cd_options(groups: &[GroupFixture]) -> QuadratizeOptions {
    QuadratizeOptions {
        hints: fixtures::hints(groups),
        ..Default::default()
    }
}

#[test]
fn example_c_metrics() {
    let p = fixtures::example_c();
    let q = quadratize_n_with(&p, &example_cd_options(&fixtures::example_c_groups())).unwrap();
    assert!(verify_perfect(&p, &q.quadratic, Tolerance::default()).unwrap().ok);
    let m = metrics(&q);
    assert_eq!(m.aux_count, 3);
    assert_eq!(m.new_quadratic_terms, 27);
    assert_eq!((m.coeff_min, m.coeff_max), (-7.0, 10.0));

    let pairs = [(b(1), b(2)), (b(3), b(4)), (b(3), b(5)), (b(4), b(5))];
    let r = baselines::rosenberg(&p, Some(&pairs)).unwrap();
    assert!(verify_perfect(&p, &r.quadratic, Tolerance::default()).unwrap().ok);
    let m = metrics(&r);
    assert_eq!(m.aux_count, 4);
    assert_eq!(m.new_quadratic_terms, 24);
    assert_eq!((m.coeff_min, m.coeff_max), (-42.0, 63.0));
}

#[test]
fn example_d_full() {
    let p = fixtures::example_d();
    let groups = fixtures::example_d_groups();
    let q = quadratize_n_with(&p, &example_cd_options(&groups)).unwrap();
    assert!(verify_perfect(&p, &q.quadratic, Tolerance::default()).unwrap().ok);
    assert_eq!(q.aux_vars.len(), 5);
    for (c, g) in q.components.iter().zip(&groups) {
        assert!(c.poly.approx_eq(&g.expected, 1e-9), "{}", g.name);
    }
    let m = metrics(&q);
    assert_eq!((m.coeff_min, m.coeff_max), (-7.0, 10.0));
}

#[test]
fn example_d_pairwise_fixture() {
    let p = fixtures::example_d();
    let q = fixtures::example_d_pairwise_cover();
    assert!(verify_perfect(&p, &q.quadratic, Tolerance::default()).unwrap().ok);
    let m = metrics(&q);
    assert_eq!(m.aux_count, 5);
    assert_eq!(m.new_quadratic_terms, 31);
    assert_eq!((m.coeff_min, m.coeff_max), (-42.0, 63.0));
}

#[test]
fn example_e_transform() {
    let p = fixtures::example_e();
    let want = fixtures::example_e_closed_form();
    let got = [
        p.coeff(&Monomial::of(&[1, 4])),
        p.coeff(&Monomial::of(&[2, 4])),
        p.coeff(&Monomial::of(&[1, 2, 4])),
        p.coeff(&Monomial::of(&[2, 3, 4])),
        p.coeff(&Monomial::of(&[1, 2, 3, 4])),
    ];
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-12, "{g} vs {w}");
    }
    assert_eq!(p.len(), 5);
}

#[test]
fn example_e_present_and_baseline() {
    let exact = fixtures::example_e();
    let q = quadratize_n(&exact).unwrap();
    assert!(verify_perfect(&exact, &q.quadratic, Tolerance::default()).unwrap().ok);
    assert_eq!(q.aux_vars.len(), 1);

    let rounded = fixtures::round2(&exact);
    let pairs = [(b(1), b(3)), (b(2), b(4))];
    let r = baselines::rosenberg(&rounded, Some(&pairs)).unwrap();
    assert!(verify_perfect(&rounded, &r.quadratic, Tolerance::default()).unwrap().ok);
    let m = metrics(&r);
    assert_eq!(m.aux_count, 2);
    assert!((m.coeff_min + 10.60).abs() < 1e-9 && (m.coeff_max - 15.90).abs() < 1e-9, "{m:?}");
}

#[test]
fn example_b_counts() {
    for n in 2..=5 {
        let p = fixtures::example_b(n);
        let q = quadratize_n(&p).unwrap();
        assert_eq!(q.aux_vars.len(), n as usize);
        assert_eq!(baselines::termwise(&p).unwrap().aux_vars.len(), 2 * n as usize);
    }
}

use super::*;
use std::collections::BTreeSet;
use crate::ffield::FieldCtx;
use crate::ratfun::RatFun;

fn e(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}

fn example(ctx: &FieldRef) -> Poly {
    let one = RatFun::one(ctx.clone());
    let inv_t = RatFun::t(ctx.clone()).inv().unwrap();
    Poly::new(ctx.clone(), vec![inv_t.neg(), RatFun::zero(ctx.clone()), one.neg(), one])
}

fn artin_schreier(p: u64) -> Poly {
    let ctx = FieldCtx::prime_field(p).unwrap();
    let one = RatFun::one(ctx.clone());
    let mut c = vec![RatFun::zero(ctx.clone()); p as usize + 1];
    c[0] = RatFun::t(ctx.clone()).inv().unwrap().neg();
    c[1] = one.neg();
    c[p as usize] = one;
    Poly::new(ctx, c)
}

fn x2_minus_t(ctx: &FieldRef) -> Poly {
    Poly::new(ctx.clone(), vec![RatFun::t(ctx.clone()).neg(), RatFun::zero(ctx.clone()), RatFun::one(ctx.clone())])
}

fn series(ctx: &FieldRef, terms: &[(i64, i64, i64)]) -> HahnSeries {
    HahnSeries::from_terms(ctx.clone(), terms.iter().map(|&(n, d, c)| (e(n, d), ctx.from_int(c))).collect())
}

fn triples(step: &Step) -> Vec<(Exponent, FF, usize)> {
    step.children.iter().map(|c| (c.r.clone(), c.zeta.clone(), c.multiplicity)).collect()
}

#[test]
fn approximation_terms_examples() {
    let f3 = FieldCtx::prime_field(3).unwrap();
    let f = example(&f3);
    let at0 = approximation_terms(&f, &HahnSeries::zero(f3.clone())).unwrap();
    assert_eq!(triples(&at0), vec![(e(-1, 3), f3.one(), 3)]);
    let at1 = approximation_terms(&f, &series(&f3, &[(-1, 3, 1)])).unwrap();
    assert_eq!(triples(&at1), vec![(e(-2, 9), f3.one(), 3)]);

    let g = x2_minus_t(&f3);
    let terms = approximation_terms(&g, &HahnSeries::zero(f3.clone())).unwrap();
    assert_eq!(triples(&terms), vec![(e(1, 2), f3.one(), 1), (e(1, 2), f3.from_int(2), 1)]);

    let root = series(&f3, &[(1, 2, 1)]);
    assert_eq!(approximation_terms(&g, &root).unwrap_err(), ExpandError::AlreadyRoot);
}

#[test]
fn branch_step_examples() {
    let f3 = FieldCtx::prime_field(3).unwrap();
    let f = example(&f3);
    let w = series(&f3, &[(-1, 3, 1), (-2, 9, 1)]);
    // oracle: f(w) = t^(-5/9) + 2 t^(-4/9) + ...
    let fw = f.evaluate_series(&w);
    assert_eq!(fw.leading_term(), Some((e(-5, 9), f3.one())));
    let step = branch_step(&f, &w, Some(&e(-2, 9))).unwrap();
    assert_eq!(triples(&step), vec![(e(-5, 27), f3.from_int(2), 3)]);

    for p in [2u64, 3, 5] {
        let f = artin_schreier(p);
        let step = branch_step(&f, &HahnSeries::zero(f.ctx().clone()), None).unwrap();
        assert_eq!(triples(&step), vec![(e(-1, p as i64), f.ctx().one(), p as usize)]);
    }
}

#[test]
fn quadratic_roots_are_exact() {
    let f3 = FieldCtx::prime_field(3).unwrap();
    let tree = expand_roots(&x2_minus_t(&f3), 5).unwrap();
    let leaves = tree.leaves();
    assert_eq!(leaves.len(), 2);
    for (id, c) in leaves.iter().zip([1, 2]) {
        let n = &tree.nodes[*id];
        assert!(matches!(n.status, Status::ExactRoot));
        assert_eq!(n.w, series(&f3, &[(1, 2, c)]));
        assert!(tree.f.evaluate_series(&n.w).is_zero());
    }
}

#[test]
fn example_chain_and_accumulation() {
    let f3 = FieldCtx::prime_field(3).unwrap();
    let f = example(&f3);
    let tree = expand_roots(&f, 3).unwrap();
    let leaves = tree.leaves();
    assert_eq!(leaves.len(), 1);
    let leaf = &tree.nodes[leaves[0]];
    assert_eq!(leaf.multiplicity, 3);
    assert_eq!(leaf.w, series(&f3, &[(-1, 3, 1), (-2, 9, 1), (-5, 27, 2)]));
    let residuals: Vec<Valuation> = tree.path(leaves[0]).iter().map(|&n| tree.nodes[n].residual.clone()).collect();
    assert_eq!(residuals[..3], [Valuation::Finite(e(-1, 1)), Valuation::Finite(e(-2, 3)), Valuation::Finite(e(-5, 9))]);
    assert!(residuals[3] > residuals[2]);

    let tree = expand_roots(&f, 12).unwrap();
    let leaf = &tree.nodes[tree.leaves()[0]];
    let Status::Accumulating(acc) = &leaf.status else { panic!("expected accumulation, got {:?}", leaf.status.name()) };
    assert_eq!(acc.r_star, e(-1, 6));
    assert_eq!(acc.j_star, BTreeSet::from([1, 3]));
    assert_eq!(acc.equation_text(), "z^3+z");
    assert_eq!(acc.ctx.header(), "F_9 = F_3[s]/(s^2+1)");
    let sols: Vec<(String, bool)> = acc.solutions.iter().map(|(z, x)| (acc.ctx.format(z), *x)).collect();
    assert_eq!(sols, vec![("0".into(), false), ("s".into(), true), ("2*s".into(), true)]);
    assert!(acc.heuristic);
    // every step from the second on is driven by lines 3 and 1
    let path = tree.path(tree.leaves()[0]);
    let first = tree.nodes[path[1]].lines.unwrap();
    assert_eq!((first.term_line, first.value_line), (Some(3), Some(2)));
    for &n in &path[2..] {
        let l = tree.nodes[n].lines.unwrap();
        assert_eq!((l.term_line, l.value_line), (Some(3), Some(1)));
    }
}

#[test]
fn artin_schreier_chain() {
    for p in [2u64, 3, 5] {
        let f = artin_schreier(p);
        let ctx = f.ctx().clone();
        let tree = expand_roots(&f, 20).unwrap();
        let leaves = tree.leaves();
        assert_eq!(leaves.len(), 1);
        let leaf = &tree.nodes[leaves[0]];
        assert_eq!(leaf.multiplicity, p as usize);
        let expected: Vec<(Exponent, FF)> = (1..=20u32).map(|n| (e(-1, (p as i64).pow(n)), ctx.one())).collect();
        assert_eq!(leaf.w.terms(), &expected[..]);
        assert_eq!(leaf.residual, Valuation::Finite(e(-1, (p as i64).pow(20))));
        let Status::Accumulating(acc) = &leaf.status else { panic!("expected accumulation") };
        assert_eq!(acc.r_star, Exponent::zero());
        let sols: Vec<FF> = acc.solutions.iter().map(|(z, _)| z.clone()).collect();
        assert_eq!(sols, ctx.elements().collect::<Vec<_>>());
        assert!(acc.solutions.iter().all(|(_, x)| !x));
        assert!(acc.heuristic);
    }
}

#[test]
fn repeated_root_splits_off() {
    // X^2 (X - t) over F_2: 0 is a double root, t a simple one
    let f2 = FieldCtx::prime_field(2).unwrap();
    let t = RatFun::t(f2.clone());
    let zero = RatFun::zero(f2.clone());
    let f = Poly::new(f2.clone(), vec![zero.clone(), zero, t.neg(), RatFun::one(f2.clone())]);
    let tree = expand_roots(&f, 4).unwrap();
    let leaves: Vec<(HahnSeries, usize, &str)> = tree
        .leaves()
        .into_iter()
        .map(|id| (tree.nodes[id].w.clone(), tree.nodes[id].multiplicity, tree.nodes[id].status.name()))
        .collect();
    assert_eq!(
        leaves,
        vec![(HahnSeries::zero(f2.clone()), 2, "exact_root"), (series(&f2, &[(1, 1, 1)]), 1, "exact_root")]
    );
    for d in 0..=4 {
        assert_eq!(tree.multiplicity_at_depth(d), 3);
    }
}

#[test]
fn json_branch_shape() {
    let f3 = FieldCtx::prime_field(3).unwrap();
    let tree = expand_roots(&example(&f3), 12).unwrap();
    let v = tree.to_json();
    let b = &v["branches"][0];
    assert_eq!(b["status"], "accumulating");
    assert_eq!(b["multiplicity"], 3);
    assert_eq!(b["terms"][0], json!({"exp": "-1/3", "coeff": "1"}));
    assert_eq!(b["accumulation"]["r"], "-1/6");
    assert_eq!(b["accumulation"]["equation"], "z^3+z");
    assert_eq!(b["accumulation"]["solutions"][1], json!({"zeta": "s", "expands": true}));
}

#[test]
fn rejects_bad_input() {
    let f3 = FieldCtx::prime_field(3).unwrap();
    assert_eq!(expand_roots(&example(&f3), 0).unwrap_err(), ExpandError::ZeroDepth);
    let c = Poly::constant(RatFun::one(f3.clone()));
    assert_eq!(expand_roots(&c, 3).unwrap_err(), ExpandError::ConstantPolynomial);
}

//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hahnroot::corpus::{corpus, random_coefficient, random_poly};
use hahnroot::envelope::{intersection_points, maxexp_of, maxram_of, order_type_bound, MaxExpMode};
use hahnroot::expand::{approximation_terms, expand_roots, ExpansionTree, Status};
use hahnroot::ffield::{FieldCtx, FieldRef, FF};
use hahnroot::hahn::{expands_at, ramifies_at, Exponent, HahnSeries, Valuation};
use hahnroot::hasse::Poly;
use hahnroot::ore::{addpol, is_additive};
use hahnroot::parse::parse_polynomial;
use hahnroot::ratfun::RatFun;

const CORPUS_SEED: u64 = 2024;
const CORPUS_DEPTH: usize = 25;
const TIME_LIMIT: Duration = Duration::from_secs(5);

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}

fn corpus_polys() -> Vec<Poly> {
    corpus(CORPUS_SEED, 50, &[2, 3], 4)
}

/// Whether the denominator of `x` is a power of `p`.
fn p_power_denominator(x: &Exponent, p: u64) -> bool {
    x.denominator_parts(p).1 == BigUint::from(1u32)
}

fn prime_factors(n: &BigUint) -> Vec<u64> {
    let mut n = n.to_u64().expect("small denominator");
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Nodes that add a term to their parent's series.
fn step_nodes(tree: &ExpansionTree) -> impl Iterator<Item = usize> + '_ {
    (0..tree.nodes.len()).filter(|&id| !tree.nodes[id].edge.is_empty())
}

fn finite_points(f: &Poly) -> Vec<Exponent> {
    intersection_points(&addpol(f).unwrap()).iter().filter_map(|b| b.r.finite().cloned()).collect()
}

fn example_golden_run() -> Outcome {
    let start = Instant::now();
    let f = parse_polynomial("X^3-X^2-1/t", 3).map_err(|e| e.to_string())?;
    let ctx = f.ctx().clone();
    let initial = approximation_terms(&f, &HahnSeries::zero(ctx.clone())).map_err(|e| e.to_string())?;
    let got: Vec<(Exponent, FF, usize)> =
        initial.children.iter().map(|c| (c.r.clone(), c.zeta.clone(), c.multiplicity)).collect();
    ensure!(got == vec![(e(-1, 3), ctx.one(), 3)], "initial terms {got:?}");

    let tree = expand_roots(&f, 12).map_err(|e| e.to_string())?;
    let leaves = tree.leaves();
    ensure!(leaves.len() == 1, "expected one chain, found {} leaves", leaves.len());
    let leaf = &tree.nodes[leaves[0]];
    let prefix = HahnSeries::from_terms(
        tree.ctx.clone(),
        vec![(e(-1, 3), tree.ctx.one()), (e(-2, 9), tree.ctx.one()), (e(-5, 27), tree.ctx.from_int(2))],
    );
    ensure!(leaf.w.truncate(&e(-5, 27), true).terms() == prefix.terms(), "chain begins {}", leaf.w);
    ensure!(leaf.w.terms().len() == 12, "chain has {} terms", leaf.w.terms().len());
    let path = tree.path(leaves[0]);
    let ascending = path.windows(2).all(|w| tree.nodes[w[1]].residual > tree.nodes[w[0]].residual);
    ensure!(ascending, "residual valuations not strictly increasing along the chain");
    ensure!(leaf.w.support().iter().all(|x| p_power_denominator(x, 3)), "exponent outside (1/3^e)Z");

    let Status::Accumulating(acc) = &leaf.status else {
        return Err(format!("leaf status {}", leaf.status.name()));
    };
    ensure!(acc.r_star == e(-1, 6), "limit {}", acc.r_star);
    ensure!(acc.equation_text() == "z^3+z", "equation {}", acc.equation_text());
    ensure!(acc.ctx.order() == Some(9), "residue field {}", acc.ctx.header());
    let nonzero: Vec<&(FF, bool)> = acc.solutions.iter().filter(|(z, _)| !acc.ctx.is_zero(z)).collect();
    ensure!(nonzero.len() == 2, "{} nonzero solutions", nonzero.len());
    for (z, expands) in nonzero {
        ensure!(acc.ctx.mul(z, z) == acc.ctx.from_int(2), "solution {} is not a square root of 2", acc.ctx.format(z));
        ensure!(*expands, "solution {} not flagged as expanding", acc.ctx.format(z));
    }
    let m = maxram_of(&addpol(&f).unwrap());
    ensure!((&m % 2u32).is_zero(), "maxram {m} is odd");
    let elapsed = start.elapsed();
    ensure!(elapsed < TIME_LIMIT, "took {elapsed:?}");
    Ok(format!("r* = -1/6, z^3+z over {}, maxram {m}, {:.3} s", acc.ctx.header(), elapsed.as_secs_f64()))
}

fn artin_schreier_family() -> Outcome {
    let mut times = Vec::new();
    for p in [2u64, 3, 5] {
        let start = Instant::now();
        let f = parse_polynomial(&format!("X^{p} - X - 1/t"), p).map_err(|e| e.to_string())?;
        let tree = expand_roots(&f, 20).map_err(|e| e.to_string())?;
        let leaves = tree.leaves();
        ensure!(leaves.len() == 1, "p={p}: {} leaves", leaves.len());
        let leaf = &tree.nodes[leaves[0]];
        ensure!(leaf.multiplicity == p as usize, "p={p}: multiplicity {}", leaf.multiplicity);
        let pp = p as i64;
        let expected: Vec<(Exponent, FF)> = (1..=20u32).map(|n| (e(-1, pp.pow(n)), tree.ctx.one())).collect();
        ensure!(leaf.w.terms() == &expected[..], "p={p}: chain {}", leaf.w);
        for (n, &id) in tree.path(leaves[0]).iter().enumerate().skip(1) {
            let want = Valuation::Finite(e(-1, pp.pow(n as u32)));
            ensure!(tree.nodes[id].residual == want, "p={p}: residual after step {n} is {}", tree.nodes[id].residual);
        }
        let Status::Accumulating(acc) = &leaf.status else {
            return Err(format!("p={p}: leaf status {}", leaf.status.name()));
        };
        ensure!(acc.r_star.is_zero(), "p={p}: limit {}", acc.r_star);
        let sols: BTreeSet<FF> = acc.solutions.iter().map(|(z, _)| z.clone()).collect();
        let fp: BTreeSet<FF> = FieldCtx::prime_field(p).unwrap().elements().map(|z| acc.embedding.apply(&z)).collect();
        ensure!(acc.ctx.is_prime_field() && sols == fp, "p={p}: solutions are not F_p");
        let m = maxram_of(&addpol(&f).unwrap());
        ensure!(m == BigUint::from(1u32), "p={p}: maxram {m}");
        let elapsed = start.elapsed();
        ensure!(elapsed < TIME_LIMIT, "p={p}: took {elapsed:?}");
        times.push(format!("p={p} {:.3} s", elapsed.as_secs_f64()));
    }
    Ok(times.join(", "))
}

fn quadratic_end_to_end() -> Outcome {
    let f = parse_polynomial("X^2-t", 3).map_err(|e| e.to_string())?;
    let ctx = f.ctx().clone();
    let tree = expand_roots(&f, 5).map_err(|e| e.to_string())?;
    let roots: Vec<HahnSeries> = tree.leaves().iter().map(|&id| tree.nodes[id].w.clone()).collect();
    let expected: Vec<HahnSeries> =
        [1, 2].iter().map(|&c| HahnSeries::monomial(ctx.clone(), ctx.from_int(c), e(1, 2))).collect();
    ensure!(roots == expected, "roots {roots:?}");
    for id in tree.leaves() {
        ensure!(matches!(tree.nodes[id].status, Status::ExactRoot), "leaf not exact");
        ensure!(f.evaluate_series(&tree.nodes[id].w).is_zero(), "f(w) != 0");
    }
    let a = addpol(&f).unwrap();
    ensure!(a.to_string() == "X^3 - t*X", "addpol {a}");
    let pts: Vec<String> = intersection_points(&a).iter().map(|b| b.r.to_string()).collect();
    ensure!(pts == ["1/2", "infinity"], "intersection points {pts:?}");
    let m = maxram_of(&a);
    ensure!(m == BigUint::from(2u32), "maxram {m}");
    let bound = order_type_bound(&f).unwrap();
    ensure!(bound.label() == "ω^2", "order bound {}", bound.label());
    Ok("roots ±t^(1/2), addpol X^3 - t*X, points {1/2, infinity}, maxram 2, ω^2".into())
}

fn addpol_corpus() -> Outcome {
    let polys = corpus_polys();
    for (k, f) in polys.iter().enumerate() {
        let a = addpol(f).map_err(|e| format!("#{k}: {e}"))?;
        let pa = a.to_poly();
        ensure!(pa.rem(f).unwrap().is_zero(), "#{k}: f = {f} does not divide {a}");
        ensure!(is_additive(&pa), "#{k}: {a} not additive");
        let p = f.ctx().characteristic() as u64;
        ensure!(a.degree() <= p.pow(f.degree().unwrap() as u32), "#{k}: degree {}", a.degree());
    }
    Ok(format!("{} polynomials, 0 failures", polys.len()))
}

fn taylor_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let fields: Vec<FieldRef> = [2u64, 3, 5].iter().map(|&p| FieldCtx::prime_field(p).unwrap()).collect();
    for k in 0..100 {
        let ctx = &fields[k % fields.len()];
        let f = random_poly(ctx, 5, &mut rng);
        let lambda = random_coefficient(ctx, &mut rng).div(&random_coefficient(ctx, &mut rng)).unwrap();
        let shift = Poly::new(ctx.clone(), vec![lambda.neg(), RatFun::one(ctx.clone())]);
        let mut rebuilt = Poly::zero(ctx.clone());
        for (i, c) in f.taylor_coeffs(&lambda).into_iter().enumerate() {
            rebuilt = rebuilt.add(&shift.pow(i as u32).scale(&c));
        }
        ensure!(rebuilt == f, "#{k}: reconstruction differs for f = {f}, λ = {lambda}");
    }
    Ok("100 pairs, 0 failures".into())
}

struct CorpusRun {
    f: Poly,
    tree: ExpansionTree,
}

fn corpus_runs() -> Vec<CorpusRun> {
    corpus_polys()
        .into_iter()
        .map(|f| {
            let tree = expand_roots(&f, CORPUS_DEPTH).expect("corpus polynomial expands");
            CorpusRun { f, tree }
        })
        .collect()
}

fn ramification_and_expansion(runs: &[CorpusRun]) -> Outcome {
    let (mut ramified, mut expanding) = (0, 0);
    for (k, run) in runs.iter().enumerate() {
        let p = run.f.ctx().characteristic() as u64;
        let points = finite_points(&run.f);
        for id in step_nodes(&run.tree) {
            let terms = run.tree.nodes[id].w.terms();
            let (r, zeta) = terms.last().unwrap();
            let before = &terms[..terms.len() - 1];
            let support: Vec<Exponent> = before.iter().map(|(x, _)| x.clone()).collect();
            let coeffs: Vec<FF> = before.iter().map(|(_, c)| c.clone()).collect();
            for q in prime_factors(&r.denominator_parts(p).1) {
                if ramifies_at(&support, r, q) {
                    ramified += 1;
                    ensure!(points.contains(r), "#{k}: {q} ramifies at {r}, not an intersection point");
                }
            }
            if expands_at(&run.tree.ctx, &coeffs, zeta) {
                expanding += 1;
                ensure!(points.contains(r), "#{k}: coefficient expands at {r}, not an intersection point");
            }
        }
    }
    Ok(format!("{ramified} ramification events, {expanding} expanding coefficients, 0 counterexamples"))
}

fn structural_bounds(runs: &[CorpusRun]) -> Outcome {
    let mut example = None;
    let (mut edges, mut off_zero, mut below_root) = (0, 0, 0);
    for (k, run) in runs.iter().enumerate() {
        let n = run.f.degree().unwrap();
        let a = addpol(&run.f).unwrap();
        let pts = intersection_points(&a);
        let finite = pts.iter().filter(|b| b.is_finite()).count();
        let lines = a.coeffs().len();
        ensure!(finite < lines.max(1), "#{k}: {finite} finite points for {lines} lines");
        ensure!(pts.len() <= n * (n + 1) / 2 + 1, "#{k}: {} points for degree {n}", pts.len());
        for d in 0..=run.tree.depth {
            let total = run.tree.multiplicity_at_depth(d);
            ensure!(total == n, "#{k}: multiplicities sum to {total} at depth {d}");
        }
        for (parent, child) in run.tree.edges() {
            edges += 1;
            let (pn, cn) = (&run.tree.nodes[parent], &run.tree.nodes[child]);
            if cn.residual > pn.residual {
                continue;
            }
            if pn.residual.is_infinite() {
                below_root += 1;
            } else if !cn.edge.contains(&0) {
                off_zero += 1;
            }
            example.get_or_insert_with(|| {
                format!("#{k} {}: v(f) = {} at w = {}, then {} at w = {}", run.f, pn.residual, pn.w, cn.residual, cn.w)
            });
        }
    }
    let failures = off_zero + below_root;
    ensure!(
        example.is_none(),
        "point counts and multiplicities hold; strict ascent fails on {failures} of {edges} edges \
         ({off_zero} children on hull edges avoiding index 0, {below_root} below an exact root); first: {}",
        example.unwrap_or_default()
    );
    Ok(format!("{edges} edges, point counts, multiplicities and ascent hold"))
}

fn bound_soundness(runs: &[CorpusRun]) -> Outcome {
    let (mut exponents, mut coefficients) = (0, 0);
    for (k, run) in runs.iter().enumerate() {
        let p = run.f.ctx().characteristic() as u64;
        let a = addpol(&run.f).unwrap();
        let m = maxram_of(&a);
        let sharp = maxexp_of(run.f.degree().unwrap(), &a, MaxExpMode::Sharp).base;
        let mut observed: Vec<(FieldRef, FF)> = Vec::new();
        for node in &run.tree.nodes {
            for (x, c) in node.w.terms() {
                exponents += 1;
                let coprime = x.denominator_parts(p).1;
                ensure!((&m % &coprime).is_zero(), "#{k}: exponent {x} outside (1/({m}·p^e))Z");
                observed.push((run.tree.ctx.clone(), c.clone()));
            }
            if let Status::Accumulating(acc) = &node.status {
                observed.extend(acc.solutions.iter().map(|(z, _)| (acc.ctx.clone(), z.clone())));
            }
        }
        for (ctx, c) in observed {
            coefficients += 1;
            let d = ctx.element_degree(&c);
            ensure!(BigUint::from(d) <= sharp, "#{k}: coefficient of degree {d} exceeds D' = {sharp}");
        }
    }
    Ok(format!("{exponents} exponents, {coefficients} coefficients, 0 failures"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let runs = corpus_runs();
    let corpus_time = start.elapsed();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("example golden run", example_golden_run()),
        ("Artin-Schreier family", artin_schreier_family()),
        ("X^2 - t end to end", quadratic_end_to_end()),
        ("addpol corpus", addpol_corpus()),
        ("Taylor identity", taylor_identity()),
        ("ramification and expansion at intersection points", ramification_and_expansion(&runs)),
        ("structural bounds", structural_bounds(&runs)),
        ("bound soundness", bound_soundness(&runs)),
    ];
    println!("corpus: 50 polynomials expanded to depth {CORPUS_DEPTH} in {:.3} s", corpus_time.as_secs_f64());
    let mut failed = 0;
    for (i, (name, outcome)) in criteria.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

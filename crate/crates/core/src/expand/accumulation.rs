//! Limit analysis for chains whose exponents converge: when the same pair
//! of lines drives several consecutive steps, the exponents approach the
//! point where those two lines cross, and the roots split there according
//! to the equation formed by the lines minimal at that point.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{ExpansionTree, Status};
use crate::ffield::{poly_roots, Embedding, FieldError, FieldRef, FqPoly, FF};
use crate::hahn::{expands_at, Exponent, Valuation};
use crate::hasse::gamma_j;
use crate::ore::is_additive;

/// Number of trailing steps that must agree on their line pair.
pub const STABLE_STEPS: usize = 4;

#[derive(Debug, Clone)]
pub struct Accumulation {
    /// Limit of the chain exponents.
    pub r_star: Exponent,
    /// Lines attaining the minimum at `r_star`.
    pub j_star: BTreeSet<usize>,
    /// Σ_{j∈J} b_j z^j over `ctx`.
    pub equation: FqPoly,
    pub ctx: FieldRef,
    /// Embedding of the tree's field at analysis time into `ctx`.
    pub embedding: Embedding,
    /// Every root of the equation, with whether it enlarges the field of
    /// the chain's coefficients.
    pub solutions: Vec<(FF, bool)>,
    /// Set unless f is additive, where the limit is known to be an
    /// intersection point.
    pub heuristic: bool,
}

impl Accumulation {
    pub(crate) fn embed(&self, emb: &Embedding) -> Accumulation {
        Accumulation {
            equation: self.equation.map(|c| emb.apply(c)),
            ctx: emb.target().clone(),
            solutions: self.solutions.iter().map(|(z, e)| (emb.apply(z), *e)).collect(),
            ..self.clone()
        }
    }

    pub fn equation_text(&self) -> String {
        format_equation(&self.equation, &self.ctx)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r_star.to_string(),
            "j": self.j_star.iter().collect::<Vec<_>>(),
            "equation": self.equation_text(),
            "solutions": self
                .solutions
                .iter()
                .map(|(z, e)| json!({ "zeta": self.ctx.format(z), "expands": e }))
                .collect::<Vec<_>>(),
            "heuristic": self.heuristic,
        })
    }
}

/// `z^3+z`, `z^2-z`, `(s+1)*z`: descending, without spaces.
pub fn format_equation(eq: &FqPoly, ctx: &FieldRef) -> String {
    let mut out = String::new();
    for (d, c) in eq.coeffs().iter().enumerate().rev() {
        if ctx.is_zero(c) {
            continue;
        }
        let (neg, mag) = if ctx.is_prime_field() { ctx.format_signed(c) } else { (false, ctx.format(c)) };
        let zpow = match d {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{d}"),
        };
        let term = match (mag.as_str(), zpow.is_empty()) {
            (m, true) => m.to_string(),
            ("1", false) => zpow,
            (m, false) if m.contains('+') => format!("({m})*{zpow}"),
            (m, false) => format!("{m}*{zpow}"),
        };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// The limit data at leaf `id`, if its last steps were driven by one
/// stable pair of distinct lines and the chain stays below their crossing.
pub fn accumulation_analysis(tree: &ExpansionTree, id: usize) -> Result<Option<Accumulation>, FieldError> {
    let leaf = &tree.nodes[id];
    if matches!(leaf.status, Status::ExactRoot) || leaf.residual.is_infinite() {
        return Ok(None);
    }
    let path = tree.path(id);
    if path.len() < STABLE_STEPS + 1 {
        return Ok(None);
    }
    let pairs: Vec<Option<(usize, usize)>> = path[path.len() - STABLE_STEPS..]
        .iter()
        .map(|&n| tree.nodes[n].lines.and_then(|l| Some((l.term_line?, l.value_line?))))
        .collect();
    let Some((l, m)) = pairs[0] else { return Ok(None) };
    if l == m || pairs.iter().any(|p| *p != Some((l, m))) {
        return Ok(None);
    }
    let state = leaf.taylor();
    let (Some((rho_l, _)), Some((rho_m, _))) = (state.leading(l), state.leading(m)) else {
        return Ok(None);
    };
    let r_star = (rho_m - rho_l).div(&Exponent::integer(l as i64 - m as i64));
    if leaf.w.terms().iter().any(|(e, _)| *e >= r_star) {
        return Ok(None);
    }
    let lines = leaf.lines_at();
    let (_, j_star) = gamma_j(&lines, &Valuation::Finite(r_star.clone()));
    let ctx = &tree.ctx;
    let top = *j_star.iter().next_back().unwrap();
    let mut coeffs = vec![ctx.zero(); top + 1];
    for line in &lines {
        if j_star.contains(&line.i) {
            coeffs[line.i] = line.b.clone();
        }
    }
    let equation = FqPoly::new(coeffs);
    let roots = poly_roots(&equation, ctx)?;
    let prefix: Vec<FF> = leaf.w.coefficients().iter().map(|c| roots.embedding.apply(c)).collect();
    let solutions =
        roots.roots.iter().map(|(z, _)| (z.clone(), expands_at(&roots.ctx, &prefix, z))).collect();
    Ok(Some(Accumulation {
        r_star,
        j_star,
        equation: equation.map(|c| roots.embedding.apply(c)),
        ctx: roots.ctx.clone(),
        embedding: roots.embedding,
        solutions,
        heuristic: !is_additive(&tree.f),
    }))
}

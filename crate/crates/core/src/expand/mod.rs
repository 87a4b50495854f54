//! Root expansion of f ∈ F_p(t)[X] in generalized power series, grown as a
//! finite-depth branch tree from w = 0. Chains whose exponents accumulate
//! end with a limit analysis instead of further steps.

mod accumulation;
pub mod hull;
mod taylor;


use num_integer::Integer;
use serde_json::{json, Value};

use crate::ffield::{enlarge, poly_roots, splitting_degree, Embedding, FieldError, FieldRef, FqPoly, FF};
use crate::hahn::{Exponent, HahnSeries, Precision, Valuation};
use crate::hasse::{lines_from_values, NewtonLine, Poly};

pub use accumulation::{accumulation_analysis, format_equation, Accumulation};
pub use hull::{lower_edges, Edge};
pub use taylor::TaylorState;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpandError {
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("w is already a root of f")]
    AlreadyRoot,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A next term ζ t^r of `multiplicity` roots, found on the hull edge whose
/// points are `edge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChildTerm {
    pub r: Exponent,
    pub zeta: FF,
    pub multiplicity: usize,
    pub edge: Vec<usize>,
}

impl ChildTerm {
    /// Whether the edge involves f(w) itself, i.e. ζ t^r is an approximation term.
    pub fn through_zero(&self) -> bool {
        self.edge.first() == Some(&0)
    }
}

/// All continuations of w past `last_r`, in a field that contains every ζ.
#[derive(Debug, Clone)]
pub struct Step {
    pub ctx: FieldRef,
    /// Embedding of the input field into `ctx`.
    pub embedding: Embedding,
    /// Multiplicity of w itself as a root (0 when f(w) ≠ 0).
    pub root_multiplicity: usize,
    /// Sorted by (r, ζ).
    pub children: Vec<ChildTerm>,
}

pub(crate) fn step_from_state(state: &TaylorState, last_r: Option<&Exponent>) -> Result<Step, FieldError> {
    let ctx = state.ctx().clone();
    let order = state.order();
    let points: Vec<(usize, Exponent)> =
        (order..state.len()).filter_map(|i| state.leading(i).map(|(v, _)| (i, v))).collect();
    let edges: Vec<Edge> =
        lower_edges(&points).into_iter().filter(|e| last_r.map_or(true, |l| e.r > *l)).collect();
    let equations: Vec<FqPoly> = edges
        .iter()
        .map(|e| {
            let mut coeffs = vec![ctx.zero(); e.length() + 1];
            for &i in &e.on_edge {
                coeffs[i - e.start] = state.leading(i).unwrap().1;
            }
            FqPoly::new(coeffs)
        })
        .collect();
    let mut extra = 1usize;
    for eq in &equations {
        extra = extra.lcm(&splitting_degree(eq, &ctx)?);
    }
    let (target, embedding) = enlarge(&ctx, extra)?;
    let mut children = Vec::new();
    for (edge, eq) in edges.iter().zip(&equations) {
        let roots = poly_roots(&eq.map(|c| embedding.apply(c)), &target)?;
        for (zeta, mult) in roots.roots {
            children.push(ChildTerm { r: edge.r.clone(), zeta, multiplicity: mult, edge: edge.on_edge.clone() });
        }
    }
    children.sort_by(|a, b| a.r.cmp(&b.r).then_with(|| a.zeta.cmp(&b.zeta)));
    Ok(Step { ctx: target, embedding, root_multiplicity: order, children })
}

fn align(f: &Poly, w: &HahnSeries) -> Result<Poly, FieldError> {
    if f.ctx() == w.ctx() {
        return Ok(f.clone());
    }
    Ok(f.embed(&Embedding::new(f.ctx(), w.ctx())?))
}

/// Every approximation term ζ t^r for w: r beyond the support of w,
/// γ_w(r) = v(f(w)), and ζ a nonzero root of Σ_{i∈J_w(r)} b_i ζ^i + b = 0.
pub fn approximation_terms(f: &Poly, w: &HahnSeries) -> Result<Step, ExpandError> {
    let f = align(f, w)?;
    let state = TaylorState::at(&f, &w.to_ratfun(1));
    if state.is_zero(0) {
        return Err(ExpandError::AlreadyRoot);
    }
    let last = w.terms().last().map(|(e, _)| e.clone());
    let mut step = step_from_state(&state, last.as_ref())?;
    step.children.retain(ChildTerm::through_zero);
    Ok(step)
}

/// All (r, ζ, multiplicity) with r > `last_r` such that exactly
/// `multiplicity` roots x of f satisfy x_{≤r} = w + ζ t^r.
pub fn branch_step(f: &Poly, w: &HahnSeries, last_r: Option<&Exponent>) -> Result<Step, ExpandError> {
    let f = align(f, w)?;
    Ok(step_from_state(&TaylorState::at(&f, &w.to_ratfun(1)), last_r)?)
}

/// Which lines drove a step: the single line ℓ ≥ 1 sharing the edge with
/// f(w), and the first other line m whose value at r equals v(f(w + ζt^r)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepLines {
    pub term_line: Option<usize>,
    pub value_line: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum Status {
    Live,
    ExactRoot,
    Accumulating(Box<Accumulation>),
    BudgetExhausted,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Live => "live",
            Status::ExactRoot => "exact_root",
            Status::Accumulating(_) => "accumulating",
            Status::BudgetExhausted => "budget_exhausted",
        }
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self, Status::Live)
    }
}

#[derive(Debug, Clone)]
pub struct BranchNode {
    /// The truncation w, an exact finite sum.
    pub w: HahnSeries,
    pub last_r: Option<Exponent>,
    pub multiplicity: usize,
    /// v(f(w)).
    pub residual: Valuation,
    pub status: Status,
    pub depth: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Set for nodes created by a step.
    pub lines: Option<StepLines>,
    /// Hull edge of the creating step (empty for the root and split-off roots).
    pub edge: Vec<usize>,
    state: TaylorState,
}

impl BranchNode {
    pub fn is_leaf(&self) -> bool {
        self.status.is_leaf()
    }

    /// Newton lines γ_i(r) = v(D^(i)f(w)) + i·r at this node.
    pub fn lines_at(&self) -> Vec<NewtonLine> {
        let values: Vec<_> = (0..self.state.len()).map(|i| self.state.value(i)).collect();
        lines_from_values(&values)
    }

    pub fn taylor(&self) -> &TaylorState {
        &self.state
    }

    /// The series as a prefix of the roots it stands for.
    pub fn series(&self) -> HahnSeries {
        let precision = match (&self.status, &self.last_r) {
            (Status::ExactRoot, _) => Precision::Exact,
            (_, Some(r)) => Precision::KnownThrough(r.clone()),
            (_, None) => return self.w.clone(),
        };
        self.w.clone().with_precision(precision).expect("terms lie within the known range")
    }
}

/// A finite-depth expansion of the roots of a monic polynomial.
#[derive(Debug, Clone)]
pub struct ExpansionTree {
    pub ctx: FieldRef,
    /// The expanded polynomial, normalized to be monic.
    pub f: Poly,
    pub depth: usize,
    pub nodes: Vec<BranchNode>,
}

impl ExpansionTree {
    fn embed(&mut self, emb: &Embedding) {
        if emb.is_identity() {
            return;
        }
        self.ctx = emb.target().clone();
        self.f = self.f.embed(emb);
        for node in &mut self.nodes {
            node.w = node.w.embed(emb);
            node.state = node.state.embed(emb);
            if let Status::Accumulating(acc) = &mut node.status {
                **acc = acc.embed(emb);
            }
        }
    }

    /// Node ids from the root down to `id`.
    pub fn path(&self, id: usize) -> Vec<usize> {
        let mut out = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// Leaves in depth-first order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if node.is_leaf() {
                out.push(id);
            }
            stack.extend(node.children.iter().rev());
        }
        out
    }

    /// Σ of leaf multiplicities among nodes at depth ≤ d, counting live
    /// nodes at depth d as leaves.
    pub fn multiplicity_at_depth(&self, d: usize) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.depth == d && !n.is_leaf() || n.depth <= d && n.is_leaf())
            .map(|n| n.multiplicity)
            .sum()
    }

    /// Every (parent, child) pair of the tree.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.iter().enumerate().flat_map(|(i, n)| n.children.iter().map(move |&c| (i, c)))
    }

    pub fn to_json(&self) -> Value {
        let branches: Vec<Value> = self.leaves().into_iter().map(|id| self.branch_json(id)).collect();
        json!({
            "field": self.ctx.header(),
            "polynomial": self.f.to_string(),
            "depth": self.depth,
            "branches": branches,
        })
    }

    pub fn branch_json(&self, id: usize) -> Value {
        let node = &self.nodes[id];
        let series = node.series();
        let mut v = json!({
            "terms": series.terms_json(),
            "multiplicity": node.multiplicity,
            "status": node.status.name(),
            "residual_valuation": node.residual.to_string(),
            "precision": match series.precision() {
                Precision::Exact => json!("exact"),
                Precision::KnownBelow(r) => json!({ "known_below": r.to_string() }),
                Precision::KnownThrough(r) => json!({ "known_through": r.to_string() }),
            },
        });
        if let Status::Accumulating(acc) = &node.status {
            v["accumulation"] = acc.to_json();
        }
        v
    }
}

fn step_lines(state: &TaylorState, child: &ChildTerm, residual: &Valuation) -> StepLines {
    let term_line = (child.through_zero() && child.edge.len() == 2).then(|| child.edge[1]);
    let value_line = residual.finite().and_then(|v| {
        (1..state.len()).find(|i| {
            !child.edge.contains(i)
                && state.leading(*i).is_some_and(|(rho, _)| &rho + &child.r.mul_int(*i as i64) == *v)
        })
    });
    StepLines { term_line, value_line }
}

fn residual_of(state: &TaylorState) -> Valuation {
    state.leading(0).map_or(Valuation::Infinite, |(v, _)| Valuation::Finite(v))
}

/// Expand the roots of `f` from w = 0. Nodes at depth `depth` become leaves;
/// those whose last steps show a stable pair of lines are analysed as
/// accumulating.
pub fn expand_roots(f: &Poly, depth: usize) -> Result<ExpansionTree, ExpandError> {
    if depth == 0 {
        return Err(ExpandError::ZeroDepth);
    }
    let n = match f.degree() {
        None | Some(0) => return Err(ExpandError::ConstantPolynomial),
        Some(n) => n,
    };
    let f = f.monic();
    let ctx = f.ctx().clone();
    let state = TaylorState::at_zero(&f);
    let root = BranchNode {
        w: HahnSeries::zero(ctx.clone()),
        last_r: None,
        multiplicity: n,
        residual: residual_of(&state),
        status: Status::Live,
        depth: 0,
        parent: None,
        children: Vec::new(),
        lines: None,
        edge: Vec::new(),
        state,
    };
    let mut tree = ExpansionTree { ctx, f, depth, nodes: vec![root] };
    let mut next = 0;
    while next < tree.nodes.len() {
        let id = next;
        next += 1;
        if tree.nodes[id].status.is_leaf() {
            continue;
        }
        let order = tree.nodes[id].state.order();
        let mult = tree.nodes[id].multiplicity;
        if order >= mult {
            tree.nodes[id].status = Status::ExactRoot;
            continue;
        }
        if tree.nodes[id].depth >= depth {
            tree.nodes[id].status = match accumulation_analysis(&tree, id)? {
                Some(acc) => {
                    let emb = acc.embedding.clone();
                    tree.embed(&emb);
                    Status::Accumulating(Box::new(acc))
                }
                None => Status::BudgetExhausted,
            };
            continue;
        }
        let step = step_from_state(&tree.nodes[id].state, tree.nodes[id].last_r.as_ref())?;
        tree.embed(&step.embedding);
        let parent = tree.nodes[id].clone();
        let mut kids = Vec::new();
        if order > 0 {
            kids.push(BranchNode {
                multiplicity: order,
                residual: Valuation::Infinite,
                status: Status::ExactRoot,
                depth: parent.depth + 1,
                parent: Some(id),
                children: Vec::new(),
                lines: None,
                edge: Vec::new(),
                ..parent.clone()
            });
        }
        for child in &step.children {
            let state = parent.state.shift(&child.zeta, &child.r);
            let residual = residual_of(&state);
            let mut w = parent.w.clone();
            w.push_term(child.r.clone(), child.zeta.clone());
            kids.push(BranchNode {
                w,
                last_r: Some(child.r.clone()),
                multiplicity: child.multiplicity,
                lines: Some(step_lines(&parent.state, child, &residual)),
                residual,
                status: Status::Live,
                depth: parent.depth + 1,
                parent: Some(id),
                children: Vec::new(),
                edge: child.edge.clone(),
                state,
            });
        }
        debug_assert_eq!(kids.iter().map(|k| k.multiplicity).sum::<usize>(), mult);
        for k in kids {
            let cid = tree.nodes.len();
            tree.nodes.push(k);
            tree.nodes[id].children.push(cid);
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests;

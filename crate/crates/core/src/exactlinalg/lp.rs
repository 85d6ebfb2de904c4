//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::{QVector, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `normal·x ≥ offset`
    Ge,
    /// `normal·x > offset`
    Gt,
    /// `normal·x = offset`
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: QVector,
    pub offset: Rational,
    pub relation: Relation,
}

/// Linear program over free variables `x ∈ Q^dim`.
///
/// When any constraint is strict the problem is a pure feasibility question:
/// the objective is ignored and the answer is `Feasible` with a witness that
/// satisfies every strict row strictly, or `Infeasible`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Option<QVector>,
    pub sense: Sense,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { point: QVector, value: Rational },
    Feasible { point: QVector },
}

impl LpOutcome {
    pub fn point(&self) -> Option<&QVector> {
        match self {
            LpOutcome::Optimal { point, .. } | LpOutcome::Feasible { point } => Some(point),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LpProblem {
    pub fn new(dim: usize) -> Self {
        LpProblem {
            dim,
            constraints: Vec::new(),
            objective: None,
            sense: Sense::Maximize,
        }
    }

    fn with(mut self, normal: QVector, offset: Rational, relation: Relation) -> Self {
        assert_eq!(normal.dim(), self.dim, "constraint dimension");
        self.constraints.push(Constraint {
            normal,
            offset,
            relation,
        });
        self
    }

    pub fn ge(self, normal: QVector, offset: Rational) -> Self {
        self.with(normal, offset, Relation::Ge)
    }

    pub fn gt(self, normal: QVector, offset: Rational) -> Self {
        self.with(normal, offset, Relation::Gt)
    }

    pub fn eq(self, normal: QVector, offset: Rational) -> Self {
        self.with(normal, offset, Relation::Eq)
    }

    pub fn maximize(mut self, objective: QVector) -> Self {
        self.objective = Some(objective);
        self.sense = Sense::Maximize;
        self
    }

    pub fn minimize(mut self, objective: QVector) -> Self {
        self.objective = Some(objective);
        self.sense = Sense::Minimize;
        self
    }
}

pub fn lp_solve(p: &LpProblem) -> LpOutcome {
    let d = p.dim;
    let strict = p.constraints.iter().any(|c| c.relation == Relation::Gt);
    // Columns: x+ (d), x- (d), then t when strict.
    let nvars = 2 * d + usize::from(strict);
    let mut rows: Vec<(Vec<Rational>, bool, Rational)> = Vec::new();
    for c in &p.constraints {
        let mut coeffs = Vec::with_capacity(nvars);
        coeffs.extend(c.normal.iter().cloned());
        coeffs.extend(c.normal.iter().map(|a| -a));
        if strict {
            coeffs.push(if c.relation == Relation::Gt {
                -Rational::one()
            } else {
                Rational::zero()
            });
        }
        rows.push((coeffs, c.relation == Relation::Eq, c.offset.clone()));
    }
    let mut objective = vec![Rational::zero(); nvars];
    if strict {
        // t ≤ 1
        let mut cap = vec![Rational::zero(); nvars];
        cap[2 * d] = -Rational::one();
        rows.push((cap, false, -Rational::one()));
        objective[2 * d] = Rational::one();
    } else if let Some(obj) = &p.objective {
        for (i, c) in obj.iter().enumerate() {
            let c = if p.sense == Sense::Maximize { c.clone() } else { -c };
            objective[i] = c.clone();
            objective[d + i] = -c;
        }
    }

    let extract = |y: &[Rational]| {
        QVector::new((0..d).map(|i| &y[i] - &y[d + i]).collect())
    };

    match simplex_max(&rows, &objective, nvars) {
        Simplex::Infeasible => LpOutcome::Infeasible,
        Simplex::Unbounded => {
            // Only possible for a true objective; the strict program is capped.
            LpOutcome::Unbounded
        }
        Simplex::Optimal { y, value } => {
            let point = extract(&y);
            if strict {
                if value.is_positive() {
                    LpOutcome::Feasible { point }
                } else {
                    LpOutcome::Infeasible
                }
            } else if let Some(obj) = &p.objective {
                let value = obj.dot(&point);
                LpOutcome::Optimal { point, value }
            } else {
                LpOutcome::Feasible { point }
            }
        }
    }
}

enum Simplex {
    Infeasible,
    Unbounded,
    Optimal { y: Vec<Rational>, value: Rational },
}

struct Tableau {
    /// Constraint rows; last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    /// Reduced costs; last entry is minus the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.t[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes with Bland's rule over the allowed columns. Returns false if unbounded.
    fn run(&mut self, allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.ncols).find(|&j| allowed[j] && self.obj[j].is_positive());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `objective·y` subject to rows `(a, is_eq, b)` meaning `a·y ≥ b`
/// (or `=` when `is_eq`), with `y ≥ 0`.
fn simplex_max(
    rows: &[(Vec<Rational>, bool, Rational)],
    objective: &[Rational],
    nvars: usize,
) -> Simplex {
    let m = rows.len();
    let surplus: Vec<usize> = (0..m).filter(|&i| !rows[i].1).collect();
    let nsur = surplus.len();
    let art0 = nvars + nsur;
    let ncols = art0 + m;

    let mut t = Vec::with_capacity(m);
    for (i, (a, _, b)) in rows.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        row[..nvars].clone_from_slice(a);
        if let Some(k) = surplus.iter().position(|&s| s == i) {
            row[nvars + k] = -Rational::one();
        }
        row[ncols] = b.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
        row[art0 + i] = Rational::one();
        t.push(row);
    }

    // Phase 1: maximize -sum(artificials).
    let mut obj = vec![Rational::zero(); ncols + 1];
    for row in &t {
        for j in 0..art0 {
            obj[j] += &row[j];
        }
        obj[ncols] += &row[ncols];
    }
    let mut tab = Tableau {
        t,
        obj,
        basis: (art0..ncols).collect(),
        ncols,
    };
    let all: Vec<bool> = (0..ncols).map(|j| j < art0).collect();
    tab.run(&all);
    if tab.obj[ncols].is_positive() {
        return Simplex::Infeasible;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= art0 {
            match (0..art0).find(|&j| !tab.t[r][j].is_zero()) {
                Some(c) => tab.pivot(r, c),
                None => {
                    tab.t.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase 2.
    let mut obj = vec![Rational::zero(); ncols + 1];
    obj[..nvars].clone_from_slice(objective);
    for (row, &b) in tab.t.iter().zip(&tab.basis) {
        if b < nvars && !objective[b].is_zero() {
            let cb = objective[b].clone();
            for (v, x) in obj.iter_mut().zip(row) {
                if !x.is_zero() {
                    *v -= &cb * x;
                }
            }
        }
    }
    tab.obj = obj;
    if !tab.run(&all) {
        return Simplex::Unbounded;
    }
    let mut y = vec![Rational::zero(); nvars];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < nvars {
            y[b] = tab.rhs(r).clone();
        }
    }
    let value = objective.iter().zip(&y).map(|(c, v)| c * v).sum();
    Simplex::Optimal { y, value }
}

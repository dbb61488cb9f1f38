use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::{FieldElement, Modulus};
use crate::jordan::{JordanBlock, JordanSpec};
use crate::linalg::Matrix;
use crate::mib::InterpInstance;
use crate::polymat::Shift;

/// Monomials `X^a Y^b` that must vanish in `Q(X + x, Y + y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultiplicitySupport {
    /// `{ (a, b) : a + |b| < mu }`.
    Triangular(usize),
    /// Arbitrary exponent tuples `(a, b_1, ..., b_r)`. Only sets equal to a
    /// triangular support are accepted by [`gs_instance`].
    Explicit(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsPoint {
    pub x: FieldElement,
    pub y: Vec<FieldElement>,
    pub support: MultiplicitySupport,
}

/// Multivariate interpolation: find `Q(X, Y) = sum_{g in exponents} p_g(X) Y^g`
/// vanishing on every point with its multiplicity support, with the shift
/// `s_g = sum_i g_i w_i` on the unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsProblem {
    pub modulus: Modulus,
    /// Number of `Y` variables.
    pub vars: usize,
    pub exponents: Vec<Vec<usize>>,
    pub points: Vec<GsPoint>,
    pub weights: Vec<i64>,
}

impl GsProblem {
    /// Bivariate list-decoding setup: exponents `0..=list_size`, one weight.
    pub fn bivariate(
        modulus: Modulus,
        list_size: usize,
        points: Vec<(FieldElement, FieldElement, usize)>,
        weight: i64,
    ) -> Self {
        GsProblem {
            modulus,
            vars: 1,
            exponents: (0..=list_size).map(|g| vec![g]).collect(),
            points: points
                .into_iter()
                .map(|(x, y, mu)| GsPoint { x, y: vec![y], support: MultiplicitySupport::Triangular(mu) })
                .collect(),
            weights: vec![weight],
        }
    }

    pub fn shift(&self) -> Shift {
        Shift::new(
            self.exponents
                .iter()
                .map(|g| g.iter().zip(&self.weights).map(|(&gi, &w)| gi as i64 * w).sum())
                .collect(),
        )
    }

    fn validate(&self) -> Result<()> {
        let r = self.vars;
        if self.weights.len() != r {
            return Err(Error::InvalidProblem(format!("{} weights for {r} variables", self.weights.len())));
        }
        if self.exponents.is_empty() {
            return Err(Error::InvalidProblem("empty exponent set".into()));
        }
        let set: HashSet<&Vec<usize>> = self.exponents.iter().collect();
        if set.len() != self.exponents.len() {
            return Err(Error::InvalidProblem("repeated exponent".into()));
        }
        for g in &self.exponents {
            if g.len() != r {
                return Err(Error::InvalidProblem(format!("exponent {g:?} has wrong length")));
            }
            for i in 0..r {
                if g[i] > 0 {
                    let mut h = g.clone();
                    h[i] -= 1;
                    if !set.contains(&h) {
                        return Err(Error::InvalidProblem(format!(
                            "exponent set is not division-stable: {g:?} without {h:?}"
                        )));
                    }
                }
            }
        }
        let mut seen = HashSet::new();
        for p in &self.points {
            if p.y.len() != r {
                return Err(Error::InvalidProblem("point of wrong dimension".into()));
            }
            self.modulus.check(p.x)?;
            for &y in &p.y {
                self.modulus.check(y)?;
            }
            if !seen.insert((p.x, p.y.clone())) {
                return Err(Error::InvalidProblem(format!("repeated point ({}, {:?})", p.x, p.y)));
            }
        }
        Ok(())
    }
}

/// The multiplicity of a support, if it is triangular.
fn triangular_order(support: &MultiplicitySupport, vars: usize) -> Result<usize> {
    match support {
        MultiplicitySupport::Triangular(0) => {
            Err(Error::InvalidProblem("multiplicities must be positive".into()))
        }
        MultiplicitySupport::Triangular(mu) => Ok(*mu),
        MultiplicitySupport::Explicit(set) => {
            let given: HashSet<&Vec<usize>> = set.iter().collect();
            if given.len() != set.len() || set.iter().any(|t| t.len() != vars + 1) {
                return Err(Error::InvalidProblem("malformed explicit support".into()));
            }
            let mu = set.iter().map(|t| t.iter().sum::<usize>()).max().map_or(0, |d| d + 1);
            let expect = multi_indices(vars + 1, mu);
            if mu == 0 || expect.len() != set.len() || expect.iter().any(|t| !given.contains(t)) {
                return Err(Error::InvalidProblem(
                    "only triangular multiplicity supports are supported".into(),
                ));
            }
            Ok(mu)
        }
    }
}

/// All tuples of length `len` with entry sum below `bound`.
fn multi_indices(len: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; len];
    fn go(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..left {
            cur[k] = v;
            go(k + 1, left - v, cur, out);
        }
        cur[k] = 0;
    }
    if bound > 0 {
        go(0, bound, &mut cur, &mut out);
    }
    out
}

/// The interpolation instance: rows are indexed by the exponent set.
///
/// Point `(x, y)` with multiplicity `mu` gives, for each `b` with
/// `|b| < mu`, a block of eigenvalue `x` and size `mu - |b|`. Its only
/// nonzero column holds `prod_i C(g_i, b_i) y_i^(g_i - b_i)` in row `g`,
/// which is the coefficient of `Y^b` in `(Y + y)^g`.
pub fn gs_instance(prob: &GsProblem) -> Result<InterpInstance> {
    prob.validate()?;
    let f = prob.modulus;
    let m = prob.exponents.len();
    let mut blocks = Vec::new();
    let mut columns: Vec<Vec<FieldElement>> = Vec::new();
    for p in &prob.points {
        let mu = triangular_order(&p.support, prob.vars)?;
        for b in multi_indices(prob.vars, mu) {
            let size = mu - b.iter().sum::<usize>();
            blocks.push(JordanBlock { eigenvalue: p.x, size });
            let head: Vec<FieldElement> = prob
                .exponents
                .iter()
                .map(|g| {
                    g.iter().zip(&b).zip(&p.y).fold(1, |acc, ((&gi, &bi), &yi)| {
                        if gi < bi {
                            0
                        } else {
                            f.mul(acc, f.mul(f.binomial(gi as u64, bi as u64), f.pow(yi, (gi - bi) as u64)))
                        }
                    })
                })
                .collect();
            columns.push(head);
            columns.extend(std::iter::repeat_n(vec![0; m], size - 1));
        }
    }
    let e = Matrix::from_fn(f, m, columns.len(), |i, c| columns[c][i]);
    let (j, e) = JordanSpec::standardize(f, &blocks, &e)?;
    InterpInstance::new(e, j, prob.shift())
}

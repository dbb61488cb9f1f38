//! JSON-friendly mirrors of the problem and result types.
//!
//! Polynomials are coefficient arrays, low degree first, `[]` for zero.
//! Matrices are nested row-major arrays of polynomials.

use serde::{Deserialize, Serialize};

use crate::apps::{ApproximantProblem, GsPoint, GsProblem, MultiplicitySupport};
use crate::error::{Error, Result};
use crate::field::{FieldElement, Modulus};
use crate::jordan::{EigenGroup, JordanBlock, JordanSpec};
use crate::linalg::Matrix;
use crate::mib::{InterpInstance, MinimalDegree};
use crate::poly::Poly;
use crate::polymat::{PolyMat, Shift};

pub type PolyWire = Vec<u64>;
pub type PolyMatWire = Vec<Vec<PolyWire>>;

pub fn polymat_to_wire(p: &PolyMat) -> PolyMatWire {
    (0..p.rows()).map(|i| p.row(i).iter().map(|e| e.coeffs().to_vec()).collect()).collect()
}

pub fn polymat_from_wire(modulus: Modulus, rows: &PolyMatWire) -> Result<PolyMat> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|c| Poly::from_residues(modulus, c.clone())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    PolyMat::from_rows(rows)
}

/// `{"groups": [[x, [sizes...]], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanFile {
    pub groups: Vec<(FieldElement, Vec<usize>)>,
}

impl JordanFile {
    pub fn from_spec(j: &JordanSpec) -> Self {
        JordanFile { groups: j.groups().iter().map(|g| (g.eigenvalue, g.sizes.clone())).collect() }
    }

    pub fn to_spec(&self, modulus: Modulus) -> Result<JordanSpec> {
        JordanSpec::from_groups(
            modulus,
            self.groups.iter().map(|(x, s)| EigenGroup { eigenvalue: *x, sizes: s.clone() }).collect(),
        )
    }
}

/// An interpolation instance. `E` is indexed by row, then block (in the
/// order of `jordan`), then coefficient; a block's array may be shorter
/// than its size. Blocks need not be in standard order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub p: u64,
    pub m: usize,
    pub jordan: Vec<(FieldElement, Vec<usize>)>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<PolyWire>>,
    pub shift: Vec<i64>,
}

impl InstanceFile {
    pub fn from_instance(inst: &InterpInstance) -> Self {
        let j = inst.jordan();
        let e = (0..inst.m())
            .map(|i| {
                j.blocks()
                    .iter()
                    .zip(j.offsets())
                    .map(|(b, &off)| {
                        let mut c = inst.e().row(i)[off..off + b.size].to_vec();
                        while c.last() == Some(&0) {
                            c.pop();
                        }
                        c
                    })
                    .collect()
            })
            .collect();
        InstanceFile {
            p: inst.modulus().p(),
            m: inst.m(),
            jordan: JordanFile::from_spec(j).groups,
            e,
            shift: inst.shift().entries().to_vec(),
        }
    }

    pub fn to_instance(&self) -> Result<InterpInstance> {
        let f = Modulus::new(self.p)?;
        let blocks: Vec<JordanBlock> = self
            .jordan
            .iter()
            .flat_map(|(x, sizes)| sizes.iter().map(|&size| JordanBlock { eigenvalue: *x, size }))
            .collect();
        if self.e.len() != self.m {
            return Err(Error::DimensionMismatch(format!("m = {} but E has {} rows", self.m, self.e.len())));
        }
        let sigma: usize = blocks.iter().map(|b| b.size).sum();
        let mut e = Matrix::zeros(f, self.m, sigma);
        for (i, row) in self.e.iter().enumerate() {
            if row.len() != blocks.len() {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} of E has {} blocks, expected {}",
                    row.len(),
                    blocks.len()
                )));
            }
            let mut off = 0;
            for (b, coeffs) in blocks.iter().zip(row) {
                if coeffs.len() > b.size {
                    return Err(Error::DimensionMismatch(format!(
                        "block of size {} given {} coefficients",
                        b.size,
                        coeffs.len()
                    )));
                }
                for (k, &c) in coeffs.iter().enumerate() {
                    e.set(i, off + k, f.check(c)?);
                }
                off += b.size;
            }
        }
        let (j, e) = JordanSpec::standardize(f, &blocks, &e)?;
        InterpInstance::new(e, j, Shift::new(self.shift.clone()))
    }
}

/// `{"basis": ..., "delta": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub basis: PolyMatWire,
    pub delta: Vec<usize>,
}

impl ResultFile {
    pub fn new(basis: &PolyMat, delta: &MinimalDegree) -> Self {
        ResultFile { basis: polymat_to_wire(basis), delta: delta.entries().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproximantFile {
    pub p: u64,
    #[serde(rename = "F")]
    pub f: PolyMatWire,
    pub orders: Vec<usize>,
    pub shift: Vec<i64>,
}

impl ApproximantFile {
    pub fn from_problem(prob: &ApproximantProblem) -> Self {
        ApproximantFile {
            p: prob.series().modulus().p(),
            f: polymat_to_wire(prob.series()),
            orders: prob.orders().to_vec(),
            shift: prob.shift().entries().to_vec(),
        }
    }

    pub fn to_problem(&self) -> Result<ApproximantProblem> {
        let f = Modulus::new(self.p)?;
        ApproximantProblem::new(polymat_from_wire(f, &self.f)?, self.orders.clone(), Shift::new(self.shift.clone()))
    }
}

/// A point with either `multiplicity` or an explicit `support`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsPointFile {
    pub x: FieldElement,
    pub y: Vec<FieldElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsFile {
    pub p: u64,
    pub vars: usize,
    pub exponents: Vec<Vec<usize>>,
    pub points: Vec<GsPointFile>,
    pub weights: Vec<i64>,
}

impl GsFile {
    pub fn from_problem(prob: &GsProblem) -> Self {
        GsFile {
            p: prob.modulus.p(),
            vars: prob.vars,
            exponents: prob.exponents.clone(),
            points: prob
                .points
                .iter()
                .map(|pt| {
                    let (multiplicity, support) = match &pt.support {
                        MultiplicitySupport::Triangular(mu) => (Some(*mu), None),
                        MultiplicitySupport::Explicit(s) => (None, Some(s.clone())),
                    };
                    GsPointFile { x: pt.x, y: pt.y.clone(), multiplicity, support }
                })
                .collect(),
            weights: prob.weights.clone(),
        }
    }

    pub fn to_problem(&self) -> Result<GsProblem> {
        let modulus = Modulus::new(self.p)?;
        let points = self
            .points
            .iter()
            .map(|pt| {
                let support = match (&pt.multiplicity, &pt.support) {
                    (Some(mu), None) => MultiplicitySupport::Triangular(*mu),
                    (None, Some(s)) => MultiplicitySupport::Explicit(s.clone()),
                    _ => {
                        return Err(Error::InvalidProblem(
                            "each point needs exactly one of multiplicity and support".into(),
                        ))
                    }
                };
                Ok(GsPoint { x: pt.x, y: pt.y.clone(), support })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GsProblem {
            modulus,
            vars: self.vars,
            exponents: self.exponents.clone(),
            points,
            weights: self.weights.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let text = r#"{"p":97,"m":2,"jordan":[[0,[1,2]]],"E":[[[1],[0,1]],[[],[5]]],"shift":[0,3]}"#;
        let file: InstanceFile = serde_json::from_str(text).unwrap();
        let inst = file.to_instance().unwrap();
        // blocks were reordered into standard form
        assert_eq!(inst.e().to_rows(), vec![vec![0, 1, 1], vec![5, 0, 0]]);
        let again = InstanceFile::from_instance(&inst);
        let json = serde_json::to_string(&again).unwrap();
        let back: InstanceFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, again);
        assert_eq!(back.to_instance().unwrap(), inst);
    }

    #[test]
    fn rejects_out_of_range_and_ragged() {
        let bad = r#"{"p":97,"m":1,"jordan":[[0,[1]]],"E":[[[97]]],"shift":[0]}"#;
        let file: InstanceFile = serde_json::from_str(bad).unwrap();
        assert!(file.to_instance().is_err());
        let ragged = r#"{"p":97,"m":1,"jordan":[[0,[1]]],"E":[[[1,2]]],"shift":[0]}"#;
        let file: InstanceFile = serde_json::from_str(ragged).unwrap();
        assert!(file.to_instance().is_err());
        let composite = r#"{"p":91,"m":1,"jordan":[],"E":[[]],"shift":[0]}"#;
        let file: InstanceFile = serde_json::from_str(composite).unwrap();
        assert_eq!(file.to_instance(), Err(Error::NotPrime(91)));
    }

    #[test]
    fn jordan_file_format() {
        let f = Modulus::new(97).unwrap();
        let j = JordanFile { groups: vec![(3, vec![2, 1]), (0, vec![4])] };
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"groups":[[3,[2,1]],[0,[4]]]}"#);
        assert_eq!(JordanFile::from_spec(&j.to_spec(f).unwrap()), j);
    }

    #[test]
    fn result_and_problem_formats() {
        let f = Modulus::new(97).unwrap();
        let p = PolyMat::from_i64(f, &[vec![vec![0, 1], vec![]], vec![vec![-1], vec![1]]]).unwrap();
        let r = ResultFile::new(&p, &MinimalDegree::new(vec![1, 0]));
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"basis":[[[0,1],[]],[[96],[1]]],"delta":[1,0]}"#);
        assert_eq!(polymat_from_wire(f, &r.basis).unwrap(), p);

        let prob = GsProblem::bivariate(f, 2, vec![(1, 2, 2), (3, 4, 1)], 1);
        let g = GsFile::from_problem(&prob);
        let back: GsFile = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back.to_problem().unwrap(), prob);

        let a = ApproximantFile { p: 97, f: vec![vec![vec![1]], vec![vec![1]]], orders: vec![2], shift: vec![0, 0] };
        assert_eq!(ApproximantFile::from_problem(&a.to_problem().unwrap()), a);
    }
}

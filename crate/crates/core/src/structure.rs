//! Finite-dimensional algebras given by structure constants:
//! c_i·c_j = Σ_k λ_k^{i,j} c_k, with (M_k)_{i,j} = λ_k^{i,j}.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::series::{Domain, Elem};

#[derive(Clone, Debug)]
pub struct StructureConstants {
    field: Domain,
    labels: Vec<String>,
    /// Sparse rows: table[i·n + j] lists the nonzero (k, λ_k^{i,j}).
    table: Vec<Vec<(usize, Elem)>>,
}

/// On-disk form; coefficients use the series text format.
#[derive(Serialize, Deserialize)]
struct ConstantsFile {
    n: usize,
    field: String,
    basis: Vec<String>,
    matrices: Vec<Vec<Vec<String>>>,
}

impl StructureConstants {
    /// Tabulates `product(i, j)`, the coordinates of c_i·c_j.
    pub fn from_products(
        field: &Domain,
        labels: Vec<String>,
        mut product: impl FnMut(usize, usize) -> Result<Vec<Elem>>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let coords = product(i, j)?;
                if coords.len() != n {
                    return Err(Error::InvalidTuple(format!("product has {} coordinates, expected {n}", coords.len())));
                }
                table.push(coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
            }
        }
        Ok(Self { field: field.clone(), labels, table })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> &Domain {
        &self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The nonzero λ_k^{i,j} of c_i·c_j.
    pub fn product_terms(&self, i: usize, j: usize) -> &[(usize, Elem)] {
        &self.table[i * self.n() + j]
    }

    pub fn lambda(&self, k: usize, i: usize, j: usize) -> Elem {
        self.product_terms(i, j)
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn matrix(&self, k: usize) -> Matrix {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.lambda(k, i, j)).collect()).collect()
    }

    /// (a·M₁·bᵀ, …, a·M_n·bᵀ).
    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Result<Vec<Elem>> {
        let n = self.n();
        if a.len() != n || b.len() != n {
            return Err(Error::InvalidTuple(format!("expected vectors of length {n}")));
        }
        let mut out = vec![self.field.zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai.try_mul(bj)?;
                for (k, lambda) in self.product_terms(i, j) {
                    out[*k] = out[*k].try_add(&ab.try_mul(lambda)?)?;
                }
            }
        }
        Ok(out)
    }

    /// Index of the basis element acting as a two-sided unit, if any.
    pub fn unit_index(&self) -> Option<usize> {
        let n = self.n();
        (0..n).find(|&e| {
            (0..n).all(|j| {
                let single = |terms: &[(usize, Elem)]| terms.len() == 1 && terms[0].0 == j && terms[0].1.is_one();
                single(self.product_terms(e, j)) && single(self.product_terms(j, e))
            })
        })
    }

    /// Triples (i, j, k) of basis elements with (c_i c_j) c_k ≠ c_i (c_j c_k).
    pub fn associativity_failures(&self) -> Result<Vec<(usize, usize, usize)>> {
        let n = self.n();
        let basis = |i: usize| {
            let mut v = vec![self.field.zero(); n];
            v[i] = self.field.one();
            v
        };
        let mut failures = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&basis(i), &basis(j))?;
                for k in 0..n {
                    let left = self.mul(&ij, &basis(k))?;
                    let right = self.mul(&basis(i), &self.mul(&basis(j), &basis(k))?)?;
                    if !left.iter().zip(&right).all(|(x, y)| x.eq_to_precision(y)) {
                        failures.push((i, j, k));
                    }
                }
            }
        }
        Ok(failures)
    }

    pub fn to_json(&self) -> String {
        let n = self.n();
        let file = ConstantsFile {
            n,
            field: self.field.to_string(),
            basis: self.labels.clone(),
            matrices: (0..n)
                .map(|k| (0..n).map(|i| (0..n).map(|j| self.lambda(k, i, j).to_string()).collect()).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConstantsFile = serde_json::from_str(text)?;
        let field: Domain = file.field.parse()?;
        let n = file.n;
        if file.basis.len() != n || file.matrices.len() != n {
            return Err(Error::Parse(format!("expected {n} basis labels and {n} matrices")));
        }
        let mut parsed = Vec::with_capacity(n);
        for m in &file.matrices {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::Parse(format!("matrices must be {n}x{n}")));
            }
            let rows = m
                .iter()
                .map(|row| row.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            parsed.push(rows);
        }
        Self::from_products(&field, file.basis, |i, j| Ok((0..n).map(|k| parsed[k][i][j].clone()).collect()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Q(i) over Q: 1·1 = 1, 1·i = i·1 = i, i·i = −1.
    fn gaussian() -> StructureConstants {
        let q = Domain::rationals();
        StructureConstants::from_products(&q, vec!["1".into(), "i".into()], |a, b| {
            Ok(match (a, b) {
                (0, k) | (k, 0) => (0..2).map(|j| if j == k { q.one() } else { q.zero() }).collect(),
                _ => vec![q.from_int(-1), q.zero()],
            })
        })
        .unwrap()
    }

    #[test]
    fn multiplies_by_table() {
        let s = gaussian();
        let q = s.field().clone();
        let a = [q.from_int(1), q.from_int(2)];
        let b = [q.from_int(3), q.from_int(-1)];
        let p = s.mul(&a, &b).unwrap();
        assert_eq!((p[0].to_string(), p[1].to_string()), ("5".into(), "5".into()));
        assert_eq!(s.unit_index(), Some(0));
        assert!(s.associativity_failures().unwrap().is_empty());
        assert_eq!(s.matrix(0)[1][1].to_string(), "-1");
    }

    #[test]
    fn json_round_trip() {
        let s = gaussian();
        let back = StructureConstants::from_json(&s.to_json()).unwrap();
        assert_eq!(back.to_json(), s.to_json());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        s.save(&path).unwrap();
        assert_eq!(StructureConstants::load(&path).unwrap().labels(), s.labels());
        assert!(StructureConstants::from_json("{\"n\": 2}").is_err());
    }
}

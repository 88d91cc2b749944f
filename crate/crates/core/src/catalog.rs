//! Built-in lattices addressed by short ids.
//!
//! Grammar: atoms `Zn:<n>` (alias `Z<n>`), `E8`, `D<n>` and `D<n>plus`,
//! joined by `+` for orthogonal sums, e.g. `E8+Z1` or `E8+E8`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{GramMatrix, Parity};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog id '{0}'")]
    UnknownId(String),
    #[error("invalid parameter in '{id}': {reason}")]
    InvalidParameter { id: String, reason: String },
}

/// Known values an entry must reproduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    pub det: i64,
    pub parity: Parity,
    /// Minimal characteristic norm, for positive definite unimodular entries.
    #[serde(default)]
    pub m: Option<u64>,
    #[serde(default)]
    pub k: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub gram: GramMatrix,
    pub expected: Option<Golden>,
}

/// `E8` as the Cartan matrix of its root system (Bourbaki numbering).
pub fn e8() -> GramMatrix {
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut rows = vec![vec![0i64; 8]; 8];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        rows[a][b] = -1;
        rows[b][a] = -1;
    }
    GramMatrix::from_i64(&rows).expect("E8 Cartan matrix is symmetric")
}

/// Gram matrix of vectors given in doubled coordinates (so half-integral
/// vectors stay integral); requires the resulting Gram to be integral.
fn gram_of_doubled(vectors: &[Vec<i64>]) -> Option<GramMatrix> {
    let n = vectors.len();
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let dot: i64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
            if dot % 4 != 0 {
                return None;
            }
            rows[i][j] = dot / 4;
        }
    }
    GramMatrix::from_i64(&rows).ok()
}

fn doubled_unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 2;
    v
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Root lattice `D_n` in the simple-root basis
/// `e_1-e_2, ..., e_{n-1}-e_n, e_{n-1}+e_n`.
pub fn d_n(n: usize) -> Result<GramMatrix, CatalogError> {
    if n < 2 {
        return Err(CatalogError::InvalidParameter {
            id: format!("D{n}"),
            reason: "D_n needs n >= 2".into(),
        });
    }
    let e: Vec<Vec<i64>> = (0..n).map(|i| doubled_unit(n, i)).collect();
    let mut basis: Vec<Vec<i64>> = (0..n - 1).map(|i| sub(&e[i], &e[i + 1])).collect();
    basis.push(add(&e[n - 2], &e[n - 1]));
    Ok(gram_of_doubled(&basis).expect("D_n is integral"))
}

/// `D_n^+ = D_n ∪ (D_n + h)` with `h = (1/2, ..., 1/2)`, for `n ≡ 0 (mod 4)`.
///
/// Basis: `e_2-e_3, ..., e_{n-1}-e_n, e_{n-1}+e_n, h`, i.e. the `D_n` simple
/// roots with `e_1-e_2` replaced by the glue vector. Its Gram determinant is 1.
pub fn d_n_plus(n: usize) -> Result<GramMatrix, CatalogError> {
    let id = format!("D{n}plus");
    if n < 4 || !n.is_multiple_of(4) {
        return Err(CatalogError::InvalidParameter {
            id,
            reason: "D_n^+ is integral only for n divisible by 4".into(),
        });
    }
    let e: Vec<Vec<i64>> = (0..n).map(|i| doubled_unit(n, i)).collect();
    let mut basis: Vec<Vec<i64>> = (1..n - 1).map(|i| sub(&e[i], &e[i + 1])).collect();
    basis.push(add(&e[n - 2], &e[n - 1]));
    basis.push(vec![1; n]);
    Ok(gram_of_doubled(&basis).expect("D_n^+ is integral for 4 | n"))
}

enum Atom {
    Z(usize),
    E8,
    D(usize),
    DPlus(usize),
}

fn parse_usize(id: &str, digits: &str) -> Result<usize, CatalogError> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CatalogError::UnknownId(id.to_string()));
    }
    digits
        .parse::<usize>()
        .map_err(|_| CatalogError::InvalidParameter {
            id: id.to_string(),
            reason: "rank out of range".into(),
        })
}

fn parse_atom(tok: &str) -> Result<Atom, CatalogError> {
    if tok == "E8" {
        return Ok(Atom::E8);
    }
    if let Some(rest) = tok.strip_prefix("Zn:").or_else(|| tok.strip_prefix('Z')) {
        let n = parse_usize(tok, rest)?;
        if n == 0 {
            return Err(CatalogError::InvalidParameter {
                id: tok.to_string(),
                reason: "rank must be at least 1".into(),
            });
        }
        return Ok(Atom::Z(n));
    }
    if let Some(rest) = tok.strip_prefix('D') {
        if let Some(digits) = rest.strip_suffix("plus") {
            return Ok(Atom::DPlus(parse_usize(tok, digits)?));
        }
        return Ok(Atom::D(parse_usize(tok, rest)?));
    }
    Err(CatalogError::UnknownId(tok.to_string()))
}

fn atom_entry(tok: &str, atom: &Atom) -> Result<(GramMatrix, Option<Golden>), CatalogError> {
    Ok(match *atom {
        Atom::Z(n) => (
            GramMatrix::identity(n),
            Some(Golden {
                det: 1,
                parity: Parity::Odd,
                m: Some(n as u64),
                k: Some(0),
            }),
        ),
        Atom::E8 => (
            e8(),
            Some(Golden {
                det: 1,
                parity: Parity::Even,
                m: Some(0),
                k: Some(1),
            }),
        ),
        Atom::D(n) => {
            let g = d_n(n).map_err(|e| retag(e, tok))?;
            (
                g,
                Some(Golden {
                    det: 4,
                    parity: Parity::Even,
                    m: None,
                    k: None,
                }),
            )
        }
        Atom::DPlus(n) => {
            let g = d_n_plus(n).map_err(|e| retag(e, tok))?;
            let parity = if n % 8 == 0 { Parity::Even } else { Parity::Odd };
            // Minimal characteristic norms established for the small cases.
            let m = match n {
                4 => Some(4),
                8 | 16 => Some(0),
                12 => Some(4),
                _ => None,
            };
            (
                g,
                Some(Golden {
                    det: 1,
                    parity,
                    m,
                    k: m.map(|m| (n as i64 - m as i64) / 8),
                }),
            )
        }
    })
}

fn retag(e: CatalogError, tok: &str) -> CatalogError {
    match e {
        CatalogError::InvalidParameter { reason, .. } => CatalogError::InvalidParameter {
            id: tok.to_string(),
            reason,
        },
        other => other,
    }
}

/// Looks up (or builds) the lattice named by `id`.
///
/// Goldens of sums are combined from their summands: determinants multiply,
/// the sum is even iff every summand is, and minimal characteristic norms add.
pub fn catalog_get(id: &str) -> Result<CatalogEntry, CatalogError> {
    let id = id.trim();
    if id.is_empty() {
        return Err(CatalogError::UnknownId(id.to_string()));
    }
    let mut gram: Option<GramMatrix> = None;
    let mut golden: Option<Golden> = None;
    let mut first = true;
    for tok in id.split('+') {
        let atom = parse_atom(tok).map_err(|e| match e {
            CatalogError::UnknownId(_) => CatalogError::UnknownId(id.to_string()),
            other => other,
        })?;
        let (g, gold) = atom_entry(tok, &atom)?;
        golden = if first {
            gold
        } else {
            match (golden, gold) {
                (Some(a), Some(b)) => {
                    let m = match (a.m, b.m) {
                        (Some(x), Some(y)) => Some(x + y),
                        _ => None,
                    };
                    Some(Golden {
                        det: a.det * b.det,
                        parity: if a.parity == Parity::Even && b.parity == Parity::Even {
                            Parity::Even
                        } else {
                            Parity::Odd
                        },
                        m,
                        k: None,
                    })
                }
                _ => None,
            }
        };
        gram = Some(match gram {
            None => g,
            Some(acc) => acc.direct_sum(&g),
        });
        first = false;
    }
    let gram = gram.expect("at least one atom");
    if let Some(gold) = golden.as_mut() {
        gold.k = gold.m.map(|m| (gram.rank() as i64 - m as i64) / 8);
    }
    Ok(CatalogEntry {
        id: id.to_string(),
        gram,
        expected: golden,
    })
}

/// The standard test corpus: `Z^n` for n ≤ 16, `E8`, `E8+Z^k` for k ≤ 4,
/// `E8+E8`, `D4`, `D12plus`, `D16plus`.
pub fn standard_ids() -> Vec<String> {
    let mut ids: Vec<String> = (1..=16).map(|n| format!("Zn:{n}")).collect();
    ids.push("E8".into());
    ids.extend((1..=4).map(|k| format!("E8+Z{k}")));
    ids.push("E8+E8".into());
    ids.push("D4".into());
    ids.push("D12plus".into());
    ids.push("D16plus".into());
    ids
}

pub fn standard_catalog() -> Vec<CatalogEntry> {
    standard_ids()
        .iter()
        .map(|id| catalog_get(id).expect("standard ids parse"))
        .collect()
}

impl Golden {
    /// Checks the structural goldens of `gram`; the characteristic values are
    /// checked by the caller that computes them.
    pub fn structural_mismatches(&self, gram: &GramMatrix) -> Vec<String> {
        let mut out = Vec::new();
        let det = gram.determinant();
        if det != BigInt::from(self.det) {
            out.push(format!("det {det} != golden {}", self.det));
        }
        let parity = gram.parity();
        if parity != self.parity {
            out.push(format!("parity {parity} != golden {}", self.parity));
        }
        out
    }
}

use num::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::AnalysisError;
use crate::rational::Rational;

/// Fixed-point system `x = A x + b` with sparse rows of `A`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FixedPointSystem {
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
}

impl FixedPointSystem {
    pub fn new(n: usize) -> Self {
        FixedPointSystem {
            rows: vec![Vec::new(); n],
            rhs: vec![Rational::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Solves exactly, one strongly connected block at a time in dependency
    /// order; each block is reduced by Gaussian elimination.
    pub fn solve(&self) -> Result<Vec<Rational>, AnalysisError> {
        let n = self.len();
        let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row {
                if !c.is_zero() {
                    g.add_edge(nodes[i], nodes[*j], ());
                }
            }
        }
        let mut x: Vec<Option<Rational>> = vec![None; n];
        let mut block_pos = vec![usize::MAX; n];
        // Successor blocks come first in Tarjan's output.
        for scc in tarjan_scc(&g) {
            let members: Vec<usize> = scc.iter().map(|v| v.index()).collect();
            for (k, &i) in members.iter().enumerate() {
                block_pos[i] = k;
            }
            let m = members.len();
            let mut mat = vec![vec![Rational::zero(); m + 1]; m];
            for (k, &i) in members.iter().enumerate() {
                mat[k][k] = Rational::one();
                let mut rhs = self.rhs[i].clone();
                for (j, c) in &self.rows[i] {
                    match &x[*j] {
                        Some(v) => rhs += c * v,
                        None => mat[k][block_pos[*j]] -= c,
                    }
                }
                mat[k][m] = rhs;
            }
            let sol = gauss(mat)?;
            for (k, &i) in members.iter().enumerate() {
                x[i] = Some(sol[k].clone());
            }
        }
        Ok(x.into_iter().map(|v| v.expect("every block solved")).collect())
    }
}

/// Solves an augmented `m x (m+1)` matrix.
fn gauss(mut mat: Vec<Vec<Rational>>) -> Result<Vec<Rational>, AnalysisError> {
    let m = mat.len();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !mat[r][col].is_zero())
            .ok_or(AnalysisError::SingularSystem { size: m })?;
        mat.swap(col, pivot);
        let inv = mat[col][col].recip();
        for v in mat[col][col..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = mat[col].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
    }
    Ok(mat.into_iter().map(|mut row| row.pop().expect("augmented column")).collect())
}

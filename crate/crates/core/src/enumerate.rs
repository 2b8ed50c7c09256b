//! Brute-force enumeration of the edge-triangle Gibbs measure on `n ≤ 7`
//! vertices, the partition polynomial in `z = e^h` and its complex zeros.

use std::io::Write;

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log_sum_exp, CompensatedSum};
use crate::phase::ModelParams;

pub const MAX_ENUMERATION_N: usize = 7;

/// Number of configurations sharing each `(edges, triangles)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub n: usize,
    /// `counts[e][t]`, `e ≤ N̄`, `t ≤ C(n, 3)`.
    pub counts: Vec<Vec<u64>>,
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Size {
            n,
            reason: "at least two vertices are required",
        });
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::Size {
            n,
            reason: "enumeration is limited to n ≤ 7",
        });
    }
    Ok(())
}

fn edge_list(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    edges
}

fn choose3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

impl CountTable {
    /// Walk all `2^{N̄}` graphs. The top edges are fixed per chunk; within a
    /// chunk the remaining edges follow a Gray code so that each step flips
    /// one edge and updates the triangle count by the number of common
    /// neighbours. Chunk tables are integer counts, so the merge is exact.
    pub fn build(n: usize) -> Result<Self> {
        check_n(n)?;
        let edges = edge_list(n);
        let total = edges.len();
        let fixed = total.min(4);
        let free = total - fixed;
        let (n_edges, n_tri) = (total + 1, choose3(n) + 1);

        let chunk = |prefix: usize| -> Vec<Vec<u64>> {
            let mut table = vec![vec![0u64; n_tri]; n_edges];
            let mut adj = [0u32; MAX_ENUMERATION_N];
            let (mut e, mut t) = (0usize, 0usize);
            let flip = |idx: usize, adj: &mut [u32; MAX_ENUMERATION_N], e: &mut usize, t: &mut usize| {
                let (i, j) = edges[idx];
                let common = (adj[i] & adj[j]).count_ones() as usize;
                if adj[i] & (1 << j) == 0 {
                    *e += 1;
                    *t += common;
                } else {
                    *e -= 1;
                    *t -= common;
                }
                adj[i] ^= 1 << j;
                adj[j] ^= 1 << i;
            };
            for b in 0..fixed {
                if prefix >> b & 1 == 1 {
                    flip(free + b, &mut adj, &mut e, &mut t);
                }
            }
            table[e][t] += 1;
            for step in 1u64..(1u64 << free) {
                flip(step.trailing_zeros() as usize, &mut adj, &mut e, &mut t);
                table[e][t] += 1;
            }
            table
        };

        let tables: Vec<Vec<Vec<u64>>> = (0..1usize << fixed).into_par_iter().map(chunk).collect();
        let mut counts = vec![vec![0u64; n_tri]; n_edges];
        for table in tables {
            for (row, add) in counts.iter_mut().zip(table) {
                for (c, a) in row.iter_mut().zip(add) {
                    *c += a;
                }
            }
        }
        Ok(Self { n, counts })
    }

    pub fn pairs(&self) -> usize {
        self.counts.len() - 1
    }

    /// `(α/n) T + h E` log weights of the nonempty cells.
    fn cells(&self, params: ModelParams) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n as f64;
        self.counts.iter().enumerate().flat_map(move |(e, row)| {
            row.iter().enumerate().filter(|(_, &c)| c > 0).map(move |(t, &c)| {
                (e, t, (c as f64).ln() + params.alpha / n * t as f64 + params.h * e as f64)
            })
        })
    }

    /// `ln C_{m;α}` for `m = 0..=N̄`.
    pub fn log_coefficients(&self, alpha: f64) -> Vec<f64> {
        let n = self.n as f64;
        self.counts
            .iter()
            .map(|row| {
                let terms: Vec<f64> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(t, &c)| (c as f64).ln() + alpha / n * t as f64)
                    .collect();
                log_sum_exp(&terms)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub n: usize,
    pub params: ModelParams,
    pub log_partition: f64,
    /// `P(S = m)` for `m = 0..=N̄`.
    pub edge_count_law: Vec<f64>,
    pub expected_edge_count: f64,
    pub expected_triangle_count: f64,
}

impl EnumerationResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Edge-count law as CSV with columns `edges, probability`.
    pub fn write_law_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["edges", "probability"])?;
        for (m, p) in self.edge_count_law.iter().enumerate() {
            w.serialize((m, p))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exact partition function, edge-count law and mean edge and triangle counts.
pub fn enumerate(n: usize, params: ModelParams) -> Result<EnumerationResult> {
    let table = CountTable::build(n)?;
    Ok(enumerate_with(&table, params))
}

pub fn enumerate_with(table: &CountTable, params: ModelParams) -> EnumerationResult {
    let cells: Vec<(usize, usize, f64)> = table.cells(params).collect();
    let logs: Vec<f64> = cells.iter().map(|c| c.2).collect();
    let log_partition = log_sum_exp(&logs);
    let mut law = vec![CompensatedSum::default(); table.pairs() + 1];
    let (mut ee, mut et) = (CompensatedSum::default(), CompensatedSum::default());
    for &(e, t, lw) in &cells {
        let p = (lw - log_partition).exp();
        law[e].add(p);
        ee.add(p * e as f64);
        et.add(p * t as f64);
    }
    EnumerationResult {
        n: table.n,
        params,
        log_partition,
        edge_count_law: law.iter().map(CompensatedSum::value).collect(),
        expected_edge_count: ee.value(),
        expected_triangle_count: et.value(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexZero {
    pub re: f64,
    pub im: f64,
}

impl From<Complex<f64>> for ComplexZero {
    fn from(z: Complex<f64>) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexZero> for Complex<f64> {
    fn from(z: ComplexZero) -> Self {
        Complex::new(z.re, z.im)
    }
}

/// `Z(z) = Σ_m C_{m;α} z^m` with coefficients kept in log space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionPolynomial {
    pub n: usize,
    pub alpha: f64,
    pub degree: usize,
    pub log_coefficients: Vec<f64>,
    pub zeros: Option<Vec<ComplexZero>>,
}

impl PartitionPolynomial {
    /// `ln Z` at `z = e^h`.
    pub fn log_eval_real(&self, h: f64) -> f64 {
        let terms: Vec<f64> = self
            .log_coefficients
            .iter()
            .enumerate()
            .map(|(m, &c)| c + h * m as f64)
            .collect();
        log_sum_exp(&terms)
    }

    fn scaled_coefficients(&self) -> (f64, Vec<f64>) {
        let max = self
            .log_coefficients
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (max, self.log_coefficients.iter().map(|&c| (c - max).exp()).collect())
    }

    /// `Z(z)/max_m C_m` and `Σ_m |C_m| |z|^m / max_m C_m` by Horner.
    fn eval_scaled(coeffs: &[f64], z: Complex<f64>) -> (Complex<f64>, f64) {
        let r = z.norm();
        let mut p = Complex::new(0.0, 0.0);
        let mut bound = 0.0;
        for &c in coeffs.iter().rev() {
            p = p * z + c;
            bound = bound * r + c.abs();
        }
        (p, bound)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_zeros_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["re", "im"])?;
        for z in self.zeros.iter().flatten() {
            w.serialize((z.re, z.im))?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn polynomial_coefficients(n: usize, alpha: f64) -> Result<PartitionPolynomial> {
    let table = CountTable::build(n)?;
    Ok(polynomial_from_table(&table, alpha))
}

pub fn polynomial_from_table(table: &CountTable, alpha: f64) -> PartitionPolynomial {
    let log_coefficients = table.log_coefficients(alpha);
    PartitionPolynomial {
        n: table.n,
        alpha,
        degree: log_coefficients.len() - 1,
        log_coefficients,
        zeros: None,
    }
}

/// Parlett–Reinsch diagonal similarity balancing in powers of two.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    loop {
        let mut done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                c += a[(j, i)].abs();
                r += a[(i, j)].abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / RADIX {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            while c > r * RADIX {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// All complex zeros of the partition polynomial.
///
/// Eigenvalues of the balanced companion matrix, each refined by a few Newton
/// steps and accepted only if `|Z(z)| ≤ 1e-8 · Σ_m C_m |z|^m`.
pub fn lee_yang_zeros(poly: &PartitionPolynomial) -> Result<Vec<ComplexZero>> {
    let d = poly.degree;
    if d > 21 {
        return Err(Error::Size {
            n: poly.n,
            reason: "root finding is limited to degree ≤ 21",
        });
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let (_, coeffs) = poly.scaled_coefficients();
    let lead = coeffs[d];
    let mut companion = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        companion[(i, d - 1)] = -coeffs[i] / lead;
    }
    balance(&mut companion);
    let eig = companion.complex_eigenvalues();

    let dcoeffs: Vec<f64> = (1..=d).map(|m| m as f64 * coeffs[m]).collect();
    let mut zeros = Vec::with_capacity(d);
    for &z0 in eig.iter() {
        let mut z = z0;
        let (mut p, mut bound) = PartitionPolynomial::eval_scaled(&coeffs, z);
        for _ in 0..8 {
            let (dp, _) = PartitionPolynomial::eval_scaled(&dcoeffs, z);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = z - p / dp;
            let (pc, bc) = PartitionPolynomial::eval_scaled(&coeffs, cand);
            if pc.norm() >= p.norm() {
                break;
            }
            (z, p, bound) = (cand, pc, bc);
        }
        if !(p.norm() <= 1e-8 * bound) {
            return Err(Error::Convergence(format!(
                "zero {z} has residual {:e} relative to scale {bound:e}",
                p.norm()
            )));
        }
        zeros.push(ComplexZero::from(z));
    }
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(zeros)
}

/// Attach zeros to the polynomial.
pub fn with_zeros(mut poly: PartitionPolynomial) -> Result<PartitionPolynomial> {
    poly.zeros = Some(lee_yang_zeros(&poly)?);
    Ok(poly)
}

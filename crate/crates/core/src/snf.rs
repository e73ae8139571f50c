//! Smith normal form over Z and the diagonal (torus) equations it solves.
//!
//! A diagonal matrix diag(t_1, …, t_m) with t_i = e^{2πi u_i} scales x^e by
//! e^{2πi ⟨e, u⟩}, so asking for prescribed scalings of a list of monomials is
//! the linear system E u ≡ s over Q/Z.

use num_integer::Integer;

use crate::{Error, Result};

/// `u · e · v = diag(d)` with `u`, `v` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: Vec<Vec<i128>>,
    pub d: Vec<i128>,
    pub v: Vec<Vec<i128>>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn row_axpy(a: &mut [Vec<i128>], dst: usize, src: usize, q: i128) {
    for c in 0..a[0].len() {
        let s = a[src][c];
        a[dst][c] -= q * s;
    }
}

fn col_axpy(a: &mut [Vec<i128>], dst: usize, src: usize, q: i128) {
    for row in a.iter_mut() {
        let s = row[src];
        row[dst] -= q * s;
    }
}

fn swap_cols(a: &mut [Vec<i128>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

pub fn smith(e: &[Vec<i64>], ncols: usize) -> Snf {
    let k = e.len();
    let m = ncols;
    let mut a: Vec<Vec<i128>> = e.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u = identity(k);
    let mut v = identity(m);
    let mut d = Vec::new();
    let mut t = 0;
    while t < k.min(m) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..k {
            for j in t..m {
                if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..k {
                let q = Integer::div_floor(&a[i][t], &p);
                if q != 0 {
                    row_axpy(&mut a, i, t, q);
                    row_axpy(&mut u, i, t, q);
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..m {
                let q = Integer::div_floor(&a[t][j], &p);
                if q != 0 {
                    col_axpy(&mut a, j, t, q);
                    col_axpy(&mut v, j, t, q);
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility of the rest of the block
                let bad = (t + 1..k).flat_map(|i| (t + 1..m).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        row_axpy(&mut a, t, i, -1);
                        row_axpy(&mut u, t, i, -1);
                        continue;
                    }
                }
            }
            // move the smallest nonzero of row/column t to the pivot
            let mut best = (t, t);
            for i in t..k {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..m {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
                u.swap(t, best.0);
            }
            if best.1 != t {
                swap_cols(&mut a, t, best.1);
                swap_cols(&mut v, t, best.1);
            }
        }
        if a[t][t] < 0 {
            for c in 0..m {
                a[t][c] = -a[t][c];
            }
            for c in 0..k {
                u[t][c] = -u[t][c];
            }
        }
        d.push(a[t][t]);
        t += 1;
    }
    Snf { u, d, v }
}

/// Solutions u ∈ (Z/L)^m of E u ≡ s, where `s` is given in units of 1/L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSolution {
    pub l: i64,
    pub particular: Vec<i64>,
    /// Generators of the homogeneous solutions, with their orders.
    pub gens: Vec<(Vec<i64>, i64)>,
}

impl TorusSolution {
    pub fn count(&self) -> u64 {
        self.gens.iter().map(|(_, o)| *o as u64).product()
    }

    /// Every solution, particular + Σ k_i g_i.
    pub fn all(&self) -> Vec<Vec<i64>> {
        let mut out = vec![self.particular.clone()];
        for (g, o) in &self.gens {
            let mut next = Vec::with_capacity(out.len() * *o as usize);
            for s in &out {
                for k in 0..*o {
                    next.push(s.iter().zip(g).map(|(a, b)| (a + k * b).rem_euclid(self.l)).collect());
                }
            }
            out = next;
        }
        out
    }
}

/// Solves E u ≡ s/`den` (mod 1) for a full-column-rank E. `None` when inconsistent;
/// an error when the solution set is infinite.
pub fn solve_torus(e: &[Vec<i64>], m: usize, s: &[i64], den: i64) -> Result<Option<TorusSolution>> {
    assert_eq!(e.len(), s.len());
    let snf = smith(e, m);
    if snf.d.len() < m {
        return Err(Error::Domain("the torus equations leave a positive-dimensional solution set".into()));
    }
    let big_d = snf.d.iter().fold(1i128, |acc, &x| acc.lcm(&x));
    let l128 = big_d * den as i128;
    let l: i64 = l128.try_into().map_err(|_| Error::Domain("torus modulus too large".into()))?;
    // U s, in units of 1/den
    let us: Vec<i128> = snf.u.iter().map(|row| row.iter().zip(s).map(|(a, &b)| a * b as i128).sum()).collect();
    if us.iter().skip(m).any(|x| x.rem_euclid(den as i128) != 0) {
        return Ok(None);
    }
    // w_i = (us_i/den + t)/d_i, in units of 1/L
    let w: Vec<i128> = (0..m).map(|i| us[i] * big_d / snf.d[i]).collect();
    let to_u = |w: &[i128]| -> Vec<i64> {
        (0..m).map(|r| (0..m).map(|c| snf.v[r][c] * w[c]).sum::<i128>().rem_euclid(l128) as i64).collect()
    };
    let particular = to_u(&w);
    let mut gens = Vec::new();
    for i in 0..m {
        if snf.d[i] > 1 {
            let mut wi = vec![0i128; m];
            wi[i] = l128 / snf.d[i];
            gens.push((to_u(&wi), snf.d[i] as i64));
        }
    }
    Ok(Some(TorusSolution { l, particular, gens }))
}

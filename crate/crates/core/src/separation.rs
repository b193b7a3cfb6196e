//! Singular value separation: a cascade of threshold transformations that
//! routes each singular value `x` into the dyadic band `[2^-j, 2^-(j-1))`
//! holding it.
//!
//! Level `j` splits the still-unassigned amplitude by the step response
//! `beta_j(x)` (assigned to branch `j`) and `beta'_j(x) = sqrt(1 - beta_j^2)`
//! (passed on). Branch `j` therefore carries
//! `B_j = B'_{j-1} beta_j` with `B'_j = prod_{l <= j} beta'_l`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{out_of_range, Error, Result};
use crate::oracle::{Formula, OracleModel};
use crate::polyapprox::{BoundedPoly, PolyCache};
use crate::scalar::{stable_sum, Real};

/// Levels `1..=m` with thresholds `phi_j = 2^-j` and one step polynomial each.
#[derive(Debug, Clone)]
pub struct CascadeConfig<T = f64> {
    eps: T,
    step_polys: Vec<Arc<BoundedPoly<T>>>,
}

pub fn threshold<T: Real>(j: usize) -> T {
    T::of(0.5f64.powi(j as i32))
}

impl<T: Real> CascadeConfig<T> {
    /// Step polynomials with the default floor `eps^2 / 8`.
    pub fn new(m: usize, eps: T) -> Result<Self> {
        Self::with_floor(m, eps, eps * eps / T::of(8.0), &PolyCache::new())
    }

    pub fn with_floor(m: usize, eps: T, floor: T, cache: &PolyCache<T>) -> Result<Self> {
        if m == 0 {
            return out_of_range("m", 0.0, "m >= 1");
        }
        let step_polys = (1..=m)
            .map(|j| cache.step(threshold(j), eps, floor))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { eps, step_polys })
    }

    pub fn m(&self) -> usize {
        self.step_polys.len()
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn step_poly(&self, j: usize) -> Result<&BoundedPoly<T>> {
        self.check_level(j)?;
        Ok(&self.step_polys[j - 1])
    }

    fn check_level(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.m() {
            return Err(Error::Level {
                level: j,
                max: self.m(),
            });
        }
        Ok(())
    }
}

/// `(beta_j(x), beta'_j(x))`.
pub fn beta_coefficients<T: Real>(cfg: &CascadeConfig<T>, x: T, j: usize) -> Result<(T, T)> {
    let b = cfg.step_poly(j)?.eval(x)?;
    Ok((b, (T::one() - b * b).max(T::zero()).sqrt()))
}

/// Per-level, per-point cascade coefficients. Rows are levels `1..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T = f64> {
    xs: Vec<T>,
    beta: Vec<Vec<T>>,
    beta_prime: Vec<Vec<T>>,
    b: Vec<Vec<T>>,
    b_prime: Vec<Vec<T>>,
}

impl<T: Real> CoefficientTable<T> {
    pub fn build(cfg: &CascadeConfig<T>, xs: &[T]) -> Result<Self> {
        for &x in xs {
            if !(x >= T::zero() && x <= T::one()) {
                return out_of_range("x", x.to_f64_lossy(), "[0, 1]");
            }
        }
        let m = cfg.m();
        let mut beta = Vec::with_capacity(m);
        let mut beta_prime = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        let mut b_prime: Vec<Vec<T>> = Vec::with_capacity(m);
        let mut carry = vec![T::one(); xs.len()];
        for j in 1..=m {
            let poly = cfg.step_poly(j)?;
            let row: Vec<T> = xs.iter().map(|&x| poly.eval_unchecked(x)).collect();
            let row_p: Vec<T> = row.iter().map(|&v| (T::one() - v * v).max(T::zero()).sqrt()).collect();
            b.push(carry.iter().zip(&row).map(|(&c, &v)| c * v).collect());
            carry = carry.iter().zip(&row_p).map(|(&c, &v)| c * v).collect();
            b_prime.push(carry.clone());
            beta.push(row);
            beta_prime.push(row_p);
        }
        Ok(Self {
            xs: xs.to_vec(),
            beta,
            beta_prime,
            b,
            b_prime,
        })
    }

    pub fn m(&self) -> usize {
        self.beta.len()
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    fn row<'a>(&self, table: &'a [Vec<T>], j: usize) -> Result<&'a [T]> {
        if j == 0 || j > self.m() {
            return Err(Error::Level {
                level: j,
                max: self.m(),
            });
        }
        Ok(&table[j - 1])
    }

    pub fn beta(&self, j: usize) -> Result<&[T]> {
        self.row(&self.beta, j)
    }

    pub fn beta_prime(&self, j: usize) -> Result<&[T]> {
        self.row(&self.beta_prime, j)
    }

    /// `B_j` at every point.
    pub fn b(&self, j: usize) -> Result<&[T]> {
        self.row(&self.b, j)
    }

    /// `B'_j` at every point.
    pub fn b_prime(&self, j: usize) -> Result<&[T]> {
        self.row(&self.b_prime, j)
    }

    /// Concentration at point `i`: see [`check_concentration`].
    pub fn concentration(&self, i: usize, c: T, eps: T) -> Result<Concentration<T>> {
        let x = self.xs[i];
        let m = self.m();
        let j = band_of(x, m)?;
        let bj = self.b[j - 1][i];
        // Past the last level the unassigned remainder plays the role of B_{m+1}.
        let next = if j < m { self.b[j][i] } else { self.b_prime[m - 1][i] };
        let mass = bj * bj + next * next;
        let floor = T::one() - c * T::of(j as f64) * eps * eps;
        Ok(Concentration {
            j_star: j,
            mass,
            ok: mass >= floor,
        })
    }

    /// `level,i,beta,beta_prime,B,B_prime` with 1-based level and 0-based `i`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,i,beta,beta_prime,B,B_prime\n");
        for j in 0..self.m() {
            for i in 0..self.xs.len() {
                out.push_str(&format!(
                    "{},{},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    j + 1,
                    i,
                    self.beta[j][i].to_f64_lossy(),
                    self.beta_prime[j][i].to_f64_lossy(),
                    self.b[j][i].to_f64_lossy(),
                    self.b_prime[j][i].to_f64_lossy()
                ));
            }
        }
        out
    }
}

/// The band `j` with `x ∈ [2^-j, 2^-(j-1))`; `x = 1` belongs to band 1.
pub fn band_of<T: Real>(x: T, m: usize) -> Result<usize> {
    if !(x >= threshold::<T>(m) && x <= T::one()) {
        return out_of_range("x", x.to_f64_lossy(), "[phi_m, 1]");
    }
    let mut j = 1;
    while x < threshold(j) {
        j += 1;
    }
    Ok(j)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Concentration<T> {
    pub j_star: usize,
    /// `B_{j*}(x)^2 + B_{j*+1}(x)^2`, with `B'_m` standing in for `B_{m+1}`.
    pub mass: T,
    /// `mass >= 1 - c j* eps^2`.
    pub ok: bool,
}

/// Checks that `x` keeps all but `O(j eps^2)` of its mass in its own band and
/// the next one.
pub fn check_concentration<T: Real>(cfg: &CascadeConfig<T>, x: T, c: T) -> Result<Concentration<T>> {
    band_of(x, cfg.m())?;
    CoefficientTable::build(cfg, &[x])?.concentration(0, c, cfg.eps())
}

/// Branch amplitudes after `k` cascade levels: branch `j` holds
/// `sqrt(p_i) B_j(sqrt(p_i))`, the residual holds `sqrt(p_i) B'_k(sqrt(p_i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredState<T = f64> {
    pub k: usize,
    pub branches: Vec<Vec<T>>,
    pub residual: Vec<T>,
}

impl<T: Real> StructuredState<T> {
    pub fn from_table(table: &CoefficientTable<T>, probs: &[T], k: usize) -> Result<Self> {
        if k == 0 || k > table.m() {
            return Err(Error::Level {
                level: k,
                max: table.m(),
            });
        }
        let amps: Vec<T> = probs.iter().map(|p| p.sqrt()).collect();
        let scale = |row: &[T]| -> Vec<T> { amps.iter().zip(row).map(|(&a, &b)| a * b).collect() };
        Ok(Self {
            k,
            branches: (1..=k).map(|j| scale(&table.b[j - 1])).collect(),
            residual: scale(&table.b_prime[k - 1]),
        })
    }

    pub fn residual_mass(&self) -> T {
        stable_sum(self.residual.iter().map(|&a| a * a))
    }

    pub fn total_norm(&self) -> T {
        stable_sum(self.branches.iter().flatten().chain(&self.residual).map(|&a| a * a))
    }
}

/// `Sum(j) = Σ_i p_i B_j(sqrt(p_i))^2`.
pub fn branch_mass<T: Real>(s: &StructuredState<T>, j: usize) -> Result<T> {
    if j == 0 || j > s.k {
        return Err(Error::Level { level: j, max: s.k });
    }
    Ok(stable_sum(s.branches[j - 1].iter().map(|&a| a * a)))
}

/// `Σ_{j <= k} deg(step_j)`: oracle uses of one application of the first `k`
/// cascade levels.
pub fn query_cost_uk<T: Real>(cfg: &CascadeConfig<T>, k: usize) -> Result<u64> {
    cfg.check_level(k)?;
    Ok(cfg.step_polys[..k].iter().map(|p| p.degree() as u64).sum())
}

/// Prepares the depth-`k` state for the oracle's distribution and charges the
/// cascade cost.
pub fn cascade_state<T: Real>(o: &mut OracleModel<T>, cfg: &CascadeConfig<T>, k: usize) -> Result<StructuredState<T>> {
    let cost = query_cost_uk(cfg, k)?;
    let table = CoefficientTable::build(cfg, &o.singular_values())?;
    let state = StructuredState::from_table(&table, o.dist().probs(), k)?;
    let c = o.cost_constant();
    o.ledger_mut().push(format!("cascade[{k}]"), Formula::Cascade, cost, c);
    Ok(state)
}

/// Garbage label: which output each level produced on this path.
type Path = Vec<bool>;

/// Level-by-level simulator that never forms products of coefficients: it
/// keeps every term `(branch, outcome, garbage path) -> amplitude` and applies
/// each level's split to the terms that are still unassigned.
#[derive(Debug, Clone)]
pub struct BranchSimulator<T = f64> {
    terms: HashMap<(usize, usize, Path), T>,
    level: usize,
}

impl<T: Real> BranchSimulator<T> {
    pub fn new(probs: &[T]) -> Self {
        let terms = probs
            .iter()
            .enumerate()
            .map(|(i, p)| ((0, i, Vec::new()), p.sqrt()))
            .collect();
        Self { terms, level: 0 }
    }

    /// Applies the next level's step polynomial `poly` to unassigned terms.
    pub fn apply_level(&mut self, poly: &BoundedPoly<T>, xs: &[T]) -> Result<()> {
        self.level += 1;
        let j = self.level;
        let mut next = HashMap::with_capacity(self.terms.len() * 2);
        for ((branch, i, path), amp) in self.terms.drain() {
            if branch != 0 {
                next.insert((branch, i, path), amp);
                continue;
            }
            let b = poly.eval(xs[i])?;
            let bp = (T::one() - b * b).max(T::zero()).sqrt();
            let mut hit = path.clone();
            hit.push(true);
            let mut miss = path;
            miss.push(false);
            next.insert((j, i, hit), amp * b);
            next.insert((0, i, miss), amp * bp);
        }
        self.terms = next;
        Ok(())
    }

    /// Amplitude of outcome `i` in branch `j` (0 = unassigned), summed over
    /// garbage labels of which, by orthogonality, at most one is present.
    pub fn amplitude(&self, j: usize, i: usize) -> T {
        let hits: Vec<T> = self
            .terms
            .iter()
            .filter(|((b, ii, _), _)| *b == j && *ii == i)
            .map(|(_, &a)| a)
            .collect();
        debug_assert!(hits.len() <= 1);
        hits.into_iter().fold(T::zero(), |acc, a| acc + a)
    }

    pub fn branch_mass(&self, j: usize) -> T {
        stable_sum(self.terms.iter().filter(|((b, _, _), _)| *b == j).map(|(_, &a)| a * a))
    }
}

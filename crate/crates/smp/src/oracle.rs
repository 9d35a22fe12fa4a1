//! Ground truth at fixed `ε`: exact linear solves for the stationary
//! distribution and hitting times, compared against expansion predictions.

use laurent::{Expansion, Rational};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::SmpError;
use crate::model::{PerturbedSmp, State};
use crate::reduction::pair_hitting;
use crate::stationary::stationary_distribution;

/// Model evaluated at a fixed `ε`, with entries given by the partial sums of
/// the expansions.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSmp {
    /// Evaluation point.
    pub eps: Rational,
    /// State identifiers; row/column `r` of the matrices belongs to `states[r]`.
    pub states: Vec<State>,
    /// Transition matrix `P = [p_ij(ε)]`.
    pub p: Vec<Vec<Rational>>,
    /// Sojourn expectation matrix `[e_ij(ε)]`.
    pub e: Vec<Vec<Rational>>,
    /// Whether the entries are exact (the expansions have zero remainders).
    pub polynomial_exact: bool,
    /// Rows whose entries do not sum to one, with the residual.
    pub row_residuals: Vec<(State, Rational)>,
    /// Entries of `P` or `E` that evaluate negative.
    pub negative_entries: Vec<(State, State)>,
}

impl NumericSmp {
    /// Position of a state in the matrices.
    pub fn index(&self, state: State) -> Option<usize> {
        self.states.iter().position(|&s| s == state)
    }

    /// Expected sojourn times `e_i = Σ_j e_ij`.
    pub fn sojourns(&self) -> Vec<Rational> {
        self.e.iter().map(|row| row.iter().fold(Rational::zero(), |a, x| a + x)).collect()
    }
}

/// Evaluates every expansion of `model` at `eps ∈ (0, ε_0]`.
///
/// `polynomial_exact` declares that the expansions are exact polynomials, in
/// which case the solves below are exact ground truth.
pub fn instantiate(model: &PerturbedSmp, eps: &Rational, polynomial_exact: bool) -> Result<NumericSmp, SmpError> {
    if !eps.is_positive() || eps > model.eps0() {
        return Err(SmpError::EpsilonOutOfRange { eps: eps.to_string(), eps0: model.eps0().to_string() });
    }
    let states = model.states().to_vec();
    let n = states.len();
    let mut p = vec![vec![Rational::zero(); n]; n];
    let mut e = vec![vec![Rational::zero(); n]; n];
    let mut negative_entries = Vec::new();
    for (r, &i) in states.iter().enumerate() {
        for (c, &j) in states.iter().enumerate() {
            if let Some(x) = model.p(i, j) {
                p[r][c] = x.evaluate(eps)?;
            }
            if let Some(x) = model.e(i, j) {
                e[r][c] = x.evaluate(eps)?;
            }
            if p[r][c].is_negative() || e[r][c].is_negative() {
                negative_entries.push((i, j));
            }
        }
    }
    let row_residuals = states
        .iter()
        .zip(&p)
        .filter_map(|(&i, row)| {
            let residual = row.iter().fold(Rational::zero(), |a, x| a + x) - Rational::one();
            (!residual.is_zero()).then_some((i, residual))
        })
        .collect();
    Ok(NumericSmp { eps: eps.clone(), states, p, e, polynomial_exact, row_residuals, negative_entries })
}

/// Solves `A x = b` exactly by Gaussian elimination with largest-magnitude
/// pivoting.  Returns `None` for a singular matrix.
pub fn solve<T>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>>
where
    T: Clone + PartialOrd + num_traits::Num + Signed,
{
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).expect("ordered scalars"))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].clone() / a[col][col].clone();
            let (upper, lower) = a.split_at_mut(row);
            for (target, pivot) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target = target.clone() - factor.clone() * pivot.clone();
            }
            let delta = factor * b[col].clone();
            b[row] = b[row].clone() - delta;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in (row + 1)..n {
            acc = acc - a[row][k].clone() * x[k].clone();
        }
        x[row] = acc / a[row][row].clone();
    }
    Some(x)
}

/// Stationary distribution `ρ` of the embedded chain: `ρP = ρ`, `Σρ = 1`.
pub fn numeric_embedded_stationary(num: &NumericSmp) -> Result<Vec<Rational>, SmpError> {
    let n = num.states.len();
    // Rows of (P^T − I), with the last equation replaced by normalisation.
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diag = if i == j { Rational::one() } else { Rational::zero() };
                    num.p[j][i].clone() - diag
                })
                .collect()
        })
        .collect();
    let mut b = vec![Rational::zero(); n];
    a[n - 1] = vec![Rational::one(); n];
    b[n - 1] = Rational::one();
    solve(a, b).ok_or_else(|| SmpError::SingularSystem(num.eps.to_string()))
}

/// Stationary distribution of the semi-Markov process:
/// `π_i = ρ_i e_i / Σ_j ρ_j e_j`.
pub fn numeric_stationary(num: &NumericSmp) -> Result<Vec<Rational>, SmpError> {
    let rho = numeric_embedded_stationary(num)?;
    let weights: Vec<Rational> = rho.iter().zip(num.sojourns()).map(|(r, e)| r * e).collect();
    let total = weights.iter().fold(Rational::zero(), |a, x| a + x);
    if total.is_zero() {
        return Err(SmpError::SingularSystem(num.eps.to_string()));
    }
    Ok(weights.into_iter().map(|w| w / &total).collect())
}

/// Expected hitting times `E_ij` of state `j` from every state `i`, solving
/// `E_ij = e_i + Σ_{r≠j} p_ir E_rj`.
pub fn numeric_hitting(num: &NumericSmp, j: State) -> Result<Vec<Rational>, SmpError> {
    let col = num.index(j).ok_or(SmpError::UnknownState(j))?;
    let n = num.states.len();
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let diag = if r == c { Rational::one() } else { Rational::zero() };
                    let p = if c == col { Rational::zero() } else { num.p[r][c].clone() };
                    diag - p
                })
                .collect()
        })
        .collect();
    solve(a, num.sojourns()).ok_or_else(|| SmpError::SingularSystem(num.eps.to_string()))
}

/// One grid point of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonPoint {
    /// Evaluation point.
    pub eps: String,
    /// Oracle value.
    pub oracle: String,
    /// Partial sum of the expansion.
    pub partial_sum: String,
    /// `|oracle − partial sum|`.
    pub error: String,
    /// Certified bound `G ε^{k+δ}`, when `ε` lies in the bound's range.
    pub bound: Option<String>,
    /// Error within the certified bound (true when no bound applies).
    pub within_bound: bool,
    /// Error as a float, for tabular display.
    pub error_f64: f64,
}

/// Comparison of one quantity across the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantityComparison {
    /// Quantity label, e.g. `pi[1]`, `E[1,1]` or `E[1,2]`.
    pub quantity: String,
    /// Expansion window `(h, k)`.
    pub window: (i64, i64),
    /// Per-point results.
    pub points: Vec<ComparisonPoint>,
    /// Least-squares slope of `log error` against `log ε` over nonzero errors.
    pub slope: Option<f64>,
    /// Required slope `k + δ/2`.
    pub slope_threshold: f64,
    /// Slope test outcome (passes with fewer than two nonzero errors).
    pub slope_pass: bool,
    /// Every certified bound holds.
    pub bound_pass: bool,
}

impl QuantityComparison {
    /// Both tests passed.
    pub fn pass(&self) -> bool {
        self.slope_pass && self.bound_pass
    }
}

/// Full comparison report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    /// Grid used.
    pub grid: Vec<String>,
    /// Whether the oracle values are exact ground truth.
    pub oracle_exact: bool,
    /// Per-quantity results.
    pub quantities: Vec<QuantityComparison>,
}

impl ComparisonReport {
    /// True when every quantity passed.
    pub fn pass(&self) -> bool {
        self.quantities.iter().all(QuantityComparison::pass)
    }

    /// Failed quantities.
    pub fn failures(&self) -> impl Iterator<Item = &QuantityComparison> {
        self.quantities.iter().filter(|q| !q.pass())
    }
}

/// Default grid `{10^-1, …, 10^-4}` restricted to `(0, ε_0]` and to the
/// smallest bound range of the model.
pub fn default_grid(model: &PerturbedSmp) -> Vec<Rational> {
    let mut limit = model.eps0().clone();
    for x in model.p_entries().values().chain(model.e_entries().values()) {
        if let Some(b) = x.bound() {
            if b.eps_max() < &limit {
                limit = b.eps_max().clone();
            }
        }
    }
    (1..=4u32)
        .map(|n| Rational::new(1.into(), num_traits::pow(10u32, n as usize).into()))
        .filter(|eps| eps <= &limit)
        .collect()
}

/// Compares the stationary probabilities, return times and pairwise hitting
/// times of `model` against exact solves of the same model on `grid`.
pub fn compare(model: &PerturbedSmp, grid: &[Rational]) -> Result<ComparisonReport, SmpError> {
    compare_against(model, model, grid)
}

/// Reads one exact quantity off a numeric solution.
type Extractor = Box<dyn Fn(&NumericSolution) -> Rational>;

/// Like [`compare`], but the oracle solves `truth` (for instance a model
/// with longer, exact expansions) while the predictions come from `model`.
pub fn compare_against(
    model: &PerturbedSmp,
    truth: &PerturbedSmp,
    grid: &[Rational],
) -> Result<ComparisonReport, SmpError> {
    let report = stationary_distribution(model, true)?;
    let mut predictions: Vec<(String, Expansion, Extractor)> = Vec::new();
    for s in &report.states {
        let i = s.state;
        predictions.push((format!("pi[{i}]"), s.pi.clone(), Box::new(move |sol| sol.pi(i))));
        predictions.push((format!("E[{i},{i}]"), s.return_time.clone(), Box::new(move |sol| sol.hit(i, i))));
    }
    let states = model.states().to_vec();
    for (a, &i) in states.iter().enumerate() {
        for &j in &states[a + 1..] {
            let pair = pair_hitting(model, i, j)?;
            predictions.push((format!("E[{i},{j}]"), pair.e_ij, Box::new(move |sol| sol.hit(i, j))));
            predictions.push((format!("E[{j},{i}]"), pair.e_ji, Box::new(move |sol| sol.hit(j, i))));
        }
    }

    let solutions = grid.iter().map(|eps| NumericSolution::new(truth, eps)).collect::<Result<Vec<_>, _>>()?;
    let quantities = predictions
        .iter()
        .map(|(label, expansion, pick)| compare_quantity(label, expansion, grid, &solutions, pick.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComparisonReport {
        grid: grid.iter().map(|g| g.to_string()).collect(),
        oracle_exact: truth.polynomial_exact(),
        quantities,
    })
}

/// Oracle solution at one `ε`.
struct NumericSolution {
    num: NumericSmp,
    pi: Vec<Rational>,
    hitting: Vec<Vec<Rational>>,
}

impl NumericSolution {
    fn new(model: &PerturbedSmp, eps: &Rational) -> Result<Self, SmpError> {
        let num = instantiate(model, eps, model.polynomial_exact())?;
        let pi = numeric_stationary(&num)?;
        let hitting = num.states.iter().map(|&j| numeric_hitting(&num, j)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { num, pi, hitting })
    }

    fn pi(&self, i: State) -> Rational {
        self.pi[self.num.index(i).expect("known state")].clone()
    }

    fn hit(&self, i: State, j: State) -> Rational {
        let (ri, rj) = (self.num.index(i).expect("known state"), self.num.index(j).expect("known state"));
        self.hitting[rj][ri].clone()
    }
}

fn compare_quantity(
    label: &str,
    expansion: &Expansion,
    grid: &[Rational],
    solutions: &[NumericSolution],
    pick: &dyn Fn(&NumericSolution) -> Rational,
) -> Result<QuantityComparison, SmpError> {
    let mut points = Vec::with_capacity(grid.len());
    let mut logs = Vec::new();
    for (eps, sol) in grid.iter().zip(solutions) {
        let oracle = pick(sol);
        let partial = expansion.evaluate(eps)?;
        let error = (&oracle - &partial).abs();
        let bound = expansion.bound().filter(|b| eps <= b.eps_max()).map(|b| b.remainder_at(expansion.k(), eps));
        let within_bound = bound.as_ref().map_or(true, |b| &error <= b);
        if !error.is_zero() {
            logs.push((laurent::rational::log2_approx(eps), laurent::rational::log2_approx(&error)));
        }
        points.push(ComparisonPoint {
            eps: eps.to_string(),
            oracle: oracle.to_string(),
            partial_sum: partial.to_string(),
            error: error.to_string(),
            bound: bound.map(|b| b.to_string()),
            within_bound,
            error_f64: to_f64(&error),
        });
    }
    let delta = expansion.bound().map_or(1.0, |b| to_f64(b.delta()));
    let slope_threshold = expansion.k() as f64 + delta / 2.0;
    let slope = least_squares_slope(&logs);
    let slope_pass = slope.map_or(true, |s| s >= slope_threshold);
    let bound_pass = points.iter().all(|p| p.within_bound);
    Ok(QuantityComparison {
        quantity: label.to_string(),
        window: (expansion.h(), expansion.k()),
        points,
        slope,
        slope_threshold,
        slope_pass,
        bound_pass,
    })
}

fn to_f64(value: &Rational) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    let sign = if value.is_negative() { -1.0 } else { 1.0 };
    sign * laurent::rational::log2_approx(&value.abs()).exp2()
}

/// Least-squares slope through `(x, y)` points; `None` with fewer than two
/// distinct abscissae.
fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Some(sxy / sxx)
}

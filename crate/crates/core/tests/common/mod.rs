#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

/// Exact minimizer of `1/2 y'Hy + g'y` over `[lo,hi]^n ∩ {sum y >= level}`
/// by enumerating every active set (each coordinate free / at `lo` / at
/// `hi`, sum constraint active or not), solving the equality-constrained
/// KKT system on each face, and keeping the best feasible candidate.
/// `H` must be positive definite.
pub fn box_halfspace_qp(h: &DMatrix<f64>, g: &DVector<f64>, lo: f64, hi: f64, level: f64) -> DVector<f64> {
    let n = g.len();
    let mut best: Option<(f64, DVector<f64>)> = None;
    let faces = 3usize.pow(n as u32);
    for code in 0..faces {
        let mut state = vec![0u8; n];
        let mut c = code;
        for s in state.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        for sum_active in [false, true] {
            if let Some(y) = solve_face(h, g, lo, hi, level, &state, sum_active) {
                let feasible = y.iter().all(|&v| v >= lo - 1e-12 && v <= hi + 1e-12) && y.sum() >= level - 1e-12;
                if !feasible {
                    continue;
                }
                let obj = 0.5 * y.dot(&(h * &y)) + g.dot(&y);
                if best.as_ref().is_none_or(|(b, _)| obj < *b) {
                    best = Some((obj, y));
                }
            }
        }
    }
    best.expect("feasible set is nonempty").1
}

fn solve_face(
    h: &DMatrix<f64>,
    g: &DVector<f64>,
    lo: f64,
    hi: f64,
    level: f64,
    state: &[u8],
    sum_active: bool,
) -> Option<DVector<f64>> {
    let n = g.len();
    let mut y = DVector::zeros(n);
    let free: Vec<usize> = (0..n).filter(|&i| state[i] == 0).collect();
    for i in 0..n {
        match state[i] {
            1 => y[i] = lo,
            2 => y[i] = hi,
            _ => {}
        }
    }
    let m = free.len() + usize::from(sum_active);
    if m == 0 {
        return Some(y);
    }
    if free.is_empty() {
        // sum constraint active with nothing free: only consistent if exact
        return ((y.sum() - level).abs() < 1e-12).then_some(y);
    }
    let mut k = DMatrix::zeros(m, m);
    let mut rhs = DVector::zeros(m);
    for (a, &i) in free.iter().enumerate() {
        for (b, &j) in free.iter().enumerate() {
            k[(a, b)] = h[(i, j)];
        }
        let fixed: f64 = (0..n).filter(|j| state[*j] != 0).map(|j| h[(i, j)] * y[j]).sum();
        rhs[a] = -g[i] - fixed;
        if sum_active {
            k[(a, free.len())] = -1.0;
            k[(free.len(), a)] = 1.0;
        }
    }
    if sum_active {
        let fixed_sum: f64 = (0..n).filter(|j| state[*j] != 0).map(|j| y[j]).sum();
        rhs[free.len()] = level - fixed_sum;
    }
    let sol = k.lu().solve(&rhs)?;
    for (a, &i) in free.iter().enumerate() {
        y[i] = sol[a];
    }
    Some(y)
}

/// Oracle for `P_C(x)`: `H = I`, `g = -x`.
pub fn project_oracle(x: &[f64], lo: f64, hi: f64, level: f64) -> Vec<f64> {
    let n = x.len();
    let g = -DVector::from_column_slice(x);
    box_halfspace_qp(&DMatrix::identity(n, n), &g, lo, hi, level)
        .iter()
        .copied()
        .collect()
}

/// Oracle for `argmin { lambda <P xh + Q y + q, y - xh> + 1/2 |y - c|^2 }`
/// over the box-halfspace set. Expanding, `H = I + 2 lambda Q` and
/// `g = lambda (P xh + q - Q xh) - c`.
#[allow(clippy::too_many_arguments)]
pub fn affine_prox_oracle(
    p: &DMatrix<f64>,
    q: &DMatrix<f64>,
    shift: &[f64],
    anchor: &[f64],
    center: &[f64],
    lambda: f64,
    lo: f64,
    hi: f64,
    level: f64,
) -> Vec<f64> {
    let n = shift.len();
    let xh = DVector::from_column_slice(anchor);
    let c = DVector::from_column_slice(center);
    let h = DMatrix::identity(n, n) + q * (2.0 * lambda);
    let g = (p * &xh + DVector::from_column_slice(shift) - q * &xh) * lambda - c;
    box_halfspace_qp(&h, &g, lo, hi, level).iter().copied().collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

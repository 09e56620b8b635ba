//! Least-squares helpers for the low-dimensional fits used by the
//! diagnostics and table builders.

/// Ordinary least squares for a small design matrix (normal equations with
/// Gaussian elimination; fine for <= 4 columns).
/// `rows[i]` holds the basis values at sample `i`. Returns the coefficients.
pub fn lsq(rows: &[Vec<f64>], ys: &[f64]) -> Vec<f64> {
    let k = rows[0].len();
    let mut ata = vec![vec![0.0; k]; k];
    let mut aty = vec![0.0; k];
    for (row, &y) in rows.iter().zip(ys) {
        for a in 0..k {
            aty[a] += row[a] * y;
            for b in 0..k {
                ata[a][b] += row[a] * row[b];
            }
        }
    }
    solve_dense(&mut ata, &mut aty);
    aty
}

fn solve_dense(m: &mut [Vec<f64>], rhs: &mut [f64]) {
    let k = rhs.len();
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        m.swap(col, piv);
        rhs.swap(col, piv);
        let d = m[col][col];
        for r in (col + 1)..k {
            let f = m[r][col] / d;
            for c in col..k {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    for col in (0..k).rev() {
        let mut v = rhs[col];
        for c in (col + 1)..k {
            v -= m[col][c] * rhs[c];
        }
        rhs[col] = v / m[col][col];
    }
}

/// Straight-line fit `y = intercept + slope * x` with standard errors.
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    pub residual_rms: f64,
}

pub fn line_fit(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let dof = (xs.len().max(3) - 2) as f64;
    let var = ss_res / dof;
    LineFit {
        slope,
        intercept,
        slope_se: (var / sxx).sqrt(),
        intercept_se: (var * (1.0 / n + mx * mx / sxx)).sqrt(),
        residual_rms: (ss_res / n).sqrt(),
    }
}

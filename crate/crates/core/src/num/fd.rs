//! Finite-difference weights on arbitrary node sets (Fornberg's algorithm).

/// Weights for the derivatives 0..=m_max of a function sampled at `nodes`,
/// evaluated at `z`. Returns `weights[m][j]` such that
/// `f^(m)(z) ~= sum_j weights[m][j] * f(nodes[j])`.
///
/// Nodes must be distinct; accuracy is the usual polynomial order
/// `nodes.len() - m`.
pub fn weights(z: f64, nodes: &[f64], m_max: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    assert!(n > m_max, "need more nodes than derivative order");
    let mut c = vec![vec![0.0; n]; m_max + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m_max);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

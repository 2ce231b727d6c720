/// Generalised Laguerre polynomial L_n^α(x) by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1+α−x) L_k − (k+α) L_{k−1}.
///
/// Orders and upper indices are unsigned, so the negative cases cannot be
/// expressed.
pub fn laguerre_polynomial(n: usize, alpha: usize, x: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

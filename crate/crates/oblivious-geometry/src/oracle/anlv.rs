//! Quadratic nearest-larger-value scan.

/// Nearest strictly larger position on each side, where equal values count
/// the higher index as larger.
pub fn anlv_oracle<T: Ord>(values: &[T]) -> Vec<(Option<usize>, Option<usize>)> {
    let larger = |a: usize, b: usize| (&values[a], a) > (&values[b], b);
    (0..values.len())
        .map(|i| ((0..i).rev().find(|&j| larger(j, i)), (i + 1..values.len()).find(|&k| larger(k, i))))
        .collect()
}

/// Standard two-finger merge.
pub fn merge_oracle<T: Ord + Clone>(c: &[T], d: &[T]) -> Vec<T> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(c.len() + d.len());
    while i < c.len() || j < d.len() {
        if j == d.len() || (i < c.len() && c[i] <= d[j]) {
            out.push(c[i].clone());
            i += 1;
        } else {
            out.push(d[j].clone());
            j += 1;
        }
    }
    out
}

/// Inclusive linear grid with exact endpoints. The interior uses the lerp
/// form so midpoints of symmetric ranges land on representable values.
pub(crate) fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    let span = end - start;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                end
            } else {
                start + span * (i as f64 / (n as f64 - 1.0))
            }
        })
        .collect()
}

/// Shortest representation that parses back to the same `f64`.
///
/// Plain decimal in the usual range, scientific notation for very large or
/// very small magnitudes.
pub fn number(x: f64) -> String {
    let magnitude = x.abs();
    if x.is_finite() && x != 0.0 && !(1e-5..1e16).contains(&magnitude) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

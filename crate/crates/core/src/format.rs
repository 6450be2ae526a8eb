//! Deterministic float rendering for CSV output.

/// Rounds `x` to `digits` significant digits and prints the shortest
/// representation that round-trips the rounded value.
///
/// Non-finite values render as `nan`, `inf` or `-inf`.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.clamp(1, 17);
    let rounded: f64 = format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("scientific rendering of a finite f64 parses back");
    // -0.0 would otherwise print with its sign
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded:?}")
}

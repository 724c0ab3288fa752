/// `x` with `digits` significant digits, fixed notation for moderate
/// magnitudes and scientific otherwise.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.*e}", digits - 1)
    }
}

pub fn table(x: f64) -> String {
    sig(x, 10)
}

/// 17 significant digits, enough to round-trip any f64.
pub fn csv(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_opt(x: Option<f64>) -> String {
    x.map(csv).unwrap_or_default()
}

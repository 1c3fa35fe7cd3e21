//! Bessel functions of the first kind of integer order, and their zeros.

use crate::error::{Error, Result};

/// Largest order accepted by [`bessel_j`].
pub const MAX_ORDER: i32 = 200;
/// Largest argument magnitude accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 1000.0;

/// `J_n(x)` for integer `n`, `|n| ≤ 200`, `|x| ≤ 1000`, absolute error below `1e-12`.
pub fn bessel_j(n: i32, x: f64) -> Result<f64> {
    if n.abs() > MAX_ORDER || !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "J_n(x) supported for |n| <= {MAX_ORDER}, |x| <= {MAX_ARGUMENT}; got n={n}, x={x}"
        )));
    }
    Ok(bessel_j_unchecked(n, x))
}

/// `J_n(x)` without range checks.
pub(crate) fn bessel_j_unchecked(n: i32, x: f64) -> f64 {
    let order = n.unsigned_abs();
    let value = bessel_j_orders(order, x.abs())[order as usize];
    // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).
    let flips = (n < 0) as u32 + (x < 0.0) as u32;
    if flips % 2 == 1 && order % 2 == 1 {
        -value
    } else {
        value
    }
}

/// `[J_0(x), …, J_{max_order}(x)]` for `x ≥ 0`.
///
/// Miller's algorithm: recur downward from an order far above both
/// `max_order` and `x`, where the minimal solution is negligible, then fix
/// the scale with `J_0 + 2 Σ_k J_{2k} = 1`.
pub(crate) fn bessel_j_orders(max_order: u32, x: f64) -> Vec<f64> {
    debug_assert!(x >= 0.0);
    let len = max_order as usize + 1;
    if x == 0.0 {
        let mut out = vec![0.0; len];
        out[0] = 1.0;
        return out;
    }
    let top = (max_order as f64).max(x);
    let mut start = (top + 30.0 + (60.0 * top).sqrt()).ceil() as usize;
    start += start % 2;

    let mut out = vec![0.0; len];
    let mut next = 0.0; // J_{k+1}
    let mut current = 1e-300; // J_k, arbitrary scale
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        if k % 2 == 0 {
            norm += 2.0 * current;
        }
        if k < len {
            out[k] = current;
        }
        let prev = 2.0 * k as f64 / x * current - next;
        next = current;
        current = prev;
        if current.abs() > 1e250 {
            let s = 1e-250;
            current *= s;
            next *= s;
            norm *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
    }
    out[0] = current;
    norm += current;
    out.iter_mut().for_each(|v| *v /= norm);
    out
}

/// `J_n(x)` for `n = -max_order..=max_order`, indexed from `-max_order`.
pub(crate) fn bessel_j_symmetric(max_order: u32, x: f64) -> Vec<f64> {
    let pos = bessel_j_orders(max_order, x.abs());
    let sign = |k: u32| if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    let mut out = Vec::with_capacity(2 * max_order as usize + 1);
    for k in (1..=max_order).rev() {
        // J_{-k}(x) = (-1)^k J_k(x)
        let s = if k % 2 == 1 { -1.0 } else { 1.0 };
        out.push(s * sign(k) * pos[k as usize]);
    }
    for k in 0..=max_order {
        out.push(sign(k) * pos[k as usize]);
    }
    out
}

/// `Σ_{|n| ≤ max_order} J_n(x)²`, which tends to 1.
pub(crate) fn bessel_weight_mass(max_order: u32, x: f64) -> f64 {
    bessel_j_symmetric(max_order, x).iter().map(|v| v * v).sum()
}

/// `k`-th positive zero of `J_n`, refined by bisection to machine precision.
pub fn bessel_zero(n: u32, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("zeros are counted from k = 1".into()));
    }
    if n > MAX_ORDER as u32 {
        return Err(Error::Domain(format!("order {n} exceeds {MAX_ORDER}")));
    }
    let order = n as i32;
    let f = |x: f64| bessel_j_unchecked(order, x);
    // J_n has no positive zero below n; J_n > 0 just above the origin.
    let step = 0.25;
    let mut a = if n == 0 { 0.0 } else { n as f64 };
    let mut fa = f(a);
    let mut found = 0;
    while a < MAX_ARGUMENT {
        let b = a + step;
        let fb = f(b);
        if fb == 0.0 || fa.signum() != fb.signum() {
            found += 1;
            if found == k {
                return Ok(if fb == 0.0 { b } else { bisect(&f, a, b, fa) });
            }
        }
        a = b;
        fa = fb;
    }
    Err(Error::Domain(format!("zero #{k} of J_{n} lies beyond x = {MAX_ARGUMENT}")))
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

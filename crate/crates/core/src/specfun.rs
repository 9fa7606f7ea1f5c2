//! Special functions used by the closed-form correlation asymptotics:
//! the sine integral Si, the (normalized) Fresnel integrals S and C, and
//! the Bessel functions J₀, J₁ and J_{3/2}.
//!
//! Each function switches between a Taylor series at small argument and an
//! asymptotic representation at large argument; switch points are chosen so
//! that both branches agree to ≈1e-10 or better in absolute terms.

use num_complex::Complex64;

/// Sine integral Si(x) = ∫₀ˣ dt sin(t)/t.
///
/// Power series for |x| ≤ 6; for larger |x| evaluated through the
/// exponential integral, Si(x) = π/2 + Im E₁(ix), with E₁ computed by a
/// continued fraction.  Absolute accuracy ≈ 1e-15.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x <= 6.0 {
        // Si(x) = Σ_n (−1)^n x^{2n+1} / ((2n+1)(2n+1)!)
        let mut sum = 0.0f64;
        let mut term = x;
        let mut n = 0usize;
        loop {
            sum += term / (2 * n + 1) as f64;
            n += 1;
            term *= -x * x / ((2 * n) as f64 * (2 * n + 1) as f64);
            if term.abs() < 1e-18 * sum.abs().max(1.0) || n > 100 {
                return sum;
            }
        }
    }
    std::f64::consts::FRAC_PI_2 + e1_of_ix(x).im
}

/// E₁(ix) for x > 0 by the modified Lentz continued fraction
/// E₁(z) = e^{−z} / (z + 1 − 1/(z + 3 − 4/(z + 5 − 9/(z + 7 − …)))).
fn e1_of_ix(x: f64) -> Complex64 {
    let z = Complex64::new(0.0, x);
    // Small but not denormal-adjacent: complex division computes |c|², which
    // would underflow to zero for the customary 1e-300 starting value.
    let tiny = Complex64::new(1e-30, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut f = tiny;
    let mut c = tiny;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..300usize {
        let (an, bn) = if n == 1 {
            (one, z + 1.0)
        } else {
            let m = (n - 1) as f64;
            (Complex64::new(-m * m, 0.0), z + (2 * n - 1) as f64)
        };
        d = bn + an * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = bn + an / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = one / d;
        let delta = c * d;
        f *= delta;
        if (delta - one).norm() < 5e-17 {
            break;
        }
    }
    (-z).exp() * f
}

/// Normalized Fresnel integrals S(x) = ∫₀ˣ dt sin(πt²/2) and
/// C(x) = ∫₀ˣ dt cos(πt²/2), returned as (S, C).
///
/// Power series for |x| ≤ 3.6, asymptotic auxiliary-function expansion
/// beyond.  Worst-case absolute error ≈ 5e-10 near the switch point,
/// ≤ 1e-12 elsewhere.
pub fn fresnel(x: f64) -> (f64, f64) {
    if x < 0.0 {
        let (s, c) = fresnel(-x);
        return (-s, -c);
    }
    let hp = std::f64::consts::FRAC_PI_2;
    if x <= 3.6 {
        // S(x) = Σ_n (−1)^n (π/2)^{2n+1} x^{4n+3} / ((2n+1)! (4n+3))
        let mut s = 0.0f64;
        let mut t = hp * x * x * x / 3.0;
        let mut n = 0usize;
        while t.abs() > 1e-18 * s.abs().max(1e-30) && n < 200 {
            s += t;
            n += 1;
            t *= -(hp * hp) * x.powi(4) * (4 * n - 1) as f64
                / ((2 * n) as f64 * (2 * n + 1) as f64 * (4 * n + 3) as f64);
        }
        // C(x) = Σ_n (−1)^n (π/2)^{2n} x^{4n+1} / ((2n)! (4n+1))
        let mut c = 0.0f64;
        let mut t = x;
        let mut n = 0usize;
        while t.abs() > 1e-18 * c.abs().max(1e-30) && n < 200 {
            c += t;
            n += 1;
            t *= -(hp * hp) * x.powi(4) * (4 * n - 3) as f64
                / ((2 * n - 1) as f64 * (2 * n) as f64 * (4 * n + 1) as f64);
        }
        return (s, c);
    }
    // Auxiliary functions: S = 1/2 − f cos(πx²/2) − g sin(πx²/2),
    //                      C = 1/2 + f sin(πx²/2) − g cos(πx²/2), with
    // f ~ (πx)⁻¹ Σ (−1)^n (4n−1)!!/(πx²)^{2n},
    // g ~ (πx)⁻¹ Σ (−1)^n (4n+1)!!/(πx²)^{2n+1}, truncated at the smallest term.
    let px2 = std::f64::consts::PI * x * x;
    let mut f = 0.0f64;
    let mut g = 0.0f64;
    let mut tf = 1.0f64;
    let mut prev = f64::INFINITY;
    let mut n = 0usize;
    loop {
        if tf.abs() > prev || n > 100 {
            break;
        }
        let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
        f += sgn * tf;
        g += sgn * tf * (4 * n + 1) as f64 / px2;
        prev = tf.abs();
        n += 1;
        tf *= (4 * n - 1) as f64 * (4 * n - 3) as f64 / (px2 * px2);
    }
    let pix = std::f64::consts::PI * x;
    f /= pix;
    g /= pix;
    let a = hp * x * x;
    (0.5 - f * a.cos() - g * a.sin(), 0.5 + f * a.sin() - g * a.cos())
}

/// Fresnel sine integral S(x).
pub fn fresnel_s(x: f64) -> f64 {
    fresnel(x).0
}

/// Fresnel cosine integral C(x).
pub fn fresnel_c(x: f64) -> f64 {
    fresnel(x).1
}

/// Bessel function of the first kind, J_ν(x) for integer ν ∈ {0, 1}.
/// Power series for |x| ≤ 12 and the Hankel asymptotic expansion beyond;
/// both branches are accurate to ≈1e-12 at the switch point.
fn bessel_j_int(nu: usize, x: f64) -> f64 {
    let ax = x.abs();
    // J₀ is even, J₁ is odd.
    let sign = if nu == 1 && x < 0.0 { -1.0 } else { 1.0 };
    if ax <= 12.0 {
        // J_ν(x) = Σ_m (−1)^m (x/2)^{2m+ν} / (m! (m+ν)!)
        let mut t = (ax / 2.0).powi(nu as i32); // 0! = 1! = 1
        let mut s = 0.0f64;
        let mut m = 0usize;
        while t.abs() > 1e-18 * s.abs().max(1e-30) && m < 300 {
            s += t;
            m += 1;
            t *= -(ax * ax / 4.0) / (m as f64 * (m + nu) as f64);
        }
        return sign * s;
    }
    // Hankel expansion: J_ν(x) = √(2/πx) [P cos χ − Q sin χ], χ = x − νπ/2 − π/4,
    // with P, Q the even/odd partial sums of a_k = Π_{j≤k} (4ν²−(2j−1)²)/(8xk),
    // truncated at the smallest term.
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = 0.0f64;
    let mut q = 0.0f64;
    let mut a = 1.0f64;
    let mut prev = f64::INFINITY;
    let mut k = 0usize;
    loop {
        if a.abs() > prev || k > 60 {
            break;
        }
        if k % 2 == 0 {
            p += if (k / 2) % 2 == 0 { a } else { -a };
        } else {
            q += if ((k - 1) / 2) % 2 == 0 { a } else { -a };
        }
        prev = a.abs();
        k += 1;
        a *= (mu - ((2 * k - 1) * (2 * k - 1)) as f64) / (k as f64 * 8.0 * ax);
    }
    let chi = ax - (nu as f64 / 2.0 + 0.25) * std::f64::consts::PI;
    sign * (2.0 / (std::f64::consts::PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Bessel function J₀(x).
pub fn bessel_j0(x: f64) -> f64 {
    bessel_j_int(0, x)
}

/// Bessel function J₁(x).
pub fn bessel_j1(x: f64) -> f64 {
    bessel_j_int(1, x)
}

/// Half-integer Bessel function J_{3/2}(x) = √(2/(πx)) (sin x / x − cos x),
/// with a series branch at small |x| to avoid cancellation.
pub fn bessel_j_3half(x: f64) -> f64 {
    if x < 0.0 {
        return f64::NAN; // J_{3/2} has a branch cut; only x ≥ 0 is meaningful here
    }
    if x == 0.0 {
        return 0.0;
    }
    let pre = (2.0 / (std::f64::consts::PI * x)).sqrt();
    if x < 0.5 {
        // sin x / x − cos x = Σ_{n≥1} (−1)^{n+1} 2n x^{2n} / (2n+1)!
        let mut s = 0.0f64;
        let mut t = x * x / 3.0f64; // n = 1 term
        let mut n = 1usize;
        while t.abs() > 1e-18 * s.abs().max(1e-30) && n < 40 {
            s += if n % 2 == 1 { t } else { -t };
            n += 1;
            t *= x * x * (2 * n) as f64 / ((2 * n - 2) as f64 * (2 * n) as f64 * (2 * n + 1) as f64);
        }
        return pre * s;
    }
    pre * (x.sin() / x - x.cos())
}

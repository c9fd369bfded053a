//! Dense univariate polynomials with integer coefficients, stored low degree first.

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::linalg::matrix;
use crate::numeric::{Complex, IntExt};

pub type Poly = Vec<Integer>;

pub fn from_i64(c: &[i64]) -> Poly {
    trim(c.iter().map(|&x| Integer::from(x)).collect())
}

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn is_zero(p: &[Integer]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Degree, with `-1` for the zero polynomial.
pub fn degree(p: &[Integer]) -> isize {
    p.iter().rposition(|c| !c.is_zero()).map_or(-1, |i| i as isize)
}

pub fn lead(p: &[Integer]) -> &Integer {
    &p[degree(p) as usize]
}

pub fn monomial(k: usize, c: Integer) -> Poly {
    let mut p = vec![Integer::new(); k + 1];
    p[k] = c;
    trim(p)
}

pub fn add(a: &[Integer], b: &[Integer]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![Integer::new(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

pub fn neg(a: &[Integer]) -> Poly {
    a.iter().map(|c| Integer::from(-c)).collect()
}

pub fn sub(a: &[Integer], b: &[Integer]) -> Poly {
    add(a, &neg(b))
}

pub fn mul(a: &[Integer], b: &[Integer]) -> Poly {
    if is_zero(a) || is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Integer::from(x * y);
        }
    }
    trim(out)
}

pub fn scale(a: &[Integer], s: &Integer) -> Poly {
    trim(a.iter().map(|c| Integer::from(c * s)).collect())
}

pub fn pow(a: &[Integer], e: u32) -> Poly {
    let mut out = vec![Integer::from(1)];
    for _ in 0..e {
        out = mul(&out, a);
    }
    out
}

/// Multiplies by `x^k`.
pub fn shift(a: &[Integer], k: usize) -> Poly {
    if is_zero(a) {
        return Vec::new();
    }
    let mut out = vec![Integer::new(); k];
    out.extend(a.iter().cloned());
    out
}

pub fn derivative(a: &[Integer]) -> Poly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Integer::from(c * i as u64))
            .collect(),
    )
}

pub fn content(a: &[Integer]) -> Integer {
    a.iter().fold(Integer::new(), |g, c| g.gcd(c))
}

/// Divides out the content and makes the leading coefficient positive.
pub fn primitive(a: &[Integer]) -> Poly {
    let a = trim(a.to_vec());
    if a.is_empty() {
        return a;
    }
    let mut g = content(&a);
    if *lead(&a) < 0 {
        g = -g;
    }
    a.iter().map(|c| Integer::from(c.div_exact_ref(&g))).collect()
}

/// Reverses coefficients: `x^deg p(1/x)`.
pub fn reciprocal(a: &[Integer]) -> Poly {
    let mut r = trim(a.to_vec());
    r.reverse();
    trim(r)
}

/// Exact quotient `a / b` over `Z[x]`, or `None` if `b` does not divide `a`.
pub fn div_exact(a: &[Integer], b: &[Integer]) -> Option<Poly> {
    let b = trim(b.to_vec());
    let db = degree(&b);
    assert!(db >= 0, "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    if r.is_empty() {
        return Some(Vec::new());
    }
    let da = degree(&r);
    if da < db {
        return None;
    }
    let lb = lead(&b).clone();
    let mut q = vec![Integer::new(); (da - db + 1) as usize];
    while degree(&r) >= db {
        let dr = degree(&r) as usize;
        let lr = &r[dr];
        if !lr.is_divisible(&lb) {
            return None;
        }
        let c = Integer::from(lr.div_exact_ref(&lb));
        let k = dr - db as usize;
        for (i, bc) in b.iter().enumerate() {
            r[i + k] -= Integer::from(&c * bc);
        }
        q[k] = c;
        r = trim(r);
    }
    if r.is_empty() {
        Some(trim(q))
    } else {
        None
    }
}

/// Pseudo-remainder `lc(b)^(da-db+1) a mod b`.
pub fn pseudo_rem(a: &[Integer], b: &[Integer]) -> Poly {
    let db = degree(b);
    let mut r = trim(a.to_vec());
    let lb = lead(b).clone();
    let mut steps = (degree(&r) - db + 1).max(0);
    while degree(&r) >= db && !r.is_empty() {
        steps -= 1;
        let dr = degree(&r) as usize;
        let k = dr - db as usize;
        let lr = r[dr].clone();
        r = scale(&r, &lb);
        for (i, bc) in b.iter().enumerate() {
            r[i + k] -= Integer::from(&lr * bc);
        }
        r = trim(r);
    }
    // skipped degrees still count towards the power of lc(b)
    for _ in 0..steps {
        r = scale(&r, &lb);
    }
    r
}

/// Primitive gcd over `Z[x]` (positive leading coefficient).
pub fn gcd(a: &[Integer], b: &[Integer]) -> Poly {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if x.is_empty() {
        return y;
    }
    if y.is_empty() {
        return x;
    }
    if degree(&x) < degree(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    primitive(&x)
}

/// Square-free part (primitive).
pub fn squarefree(a: &[Integer]) -> Poly {
    let a = primitive(a);
    if degree(&a) <= 0 {
        return a;
    }
    let g = gcd(&a, &derivative(&a));
    primitive(&div_exact(&a, &g).expect("gcd divides"))
}

pub fn eval_int(a: &[Integer], x: &Integer) -> Integer {
    a.iter().rev().fold(Integer::new(), |acc, c| acc * x + c)
}

pub fn eval_rational(a: &[Integer], x: &Rational) -> Rational {
    a.iter().rev().fold(Rational::new(), |acc, c| acc * x + c)
}

pub fn eval_float(a: &[Integer], x: &Float) -> Float {
    let p = x.prec();
    a.iter()
        .rev()
        .fold(Float::new(p), |acc, c| acc * x + Float::with_val(p, c))
}

pub fn eval_complex(a: &[Integer], z: &Complex) -> Complex {
    let p = z.prec();
    a.iter().rev().fold(Complex::zero(p), |acc, c| {
        let mut v = &acc * z;
        v.re += Float::with_val(p, c);
        v
    })
}

/// The `m`-th cyclotomic polynomial, `prod_{d | m} (x^d - 1)^mu(m/d)`.
pub fn cyclotomic(m: u64) -> Poly {
    assert!(m >= 1);
    let mut num = vec![Integer::from(1)];
    let mut den = vec![Integer::from(1)];
    for d in divisors(m) {
        let mut f = monomial(d as usize, Integer::from(1));
        f[0] -= 1;
        match mobius(m / d) {
            1 => num = mul(&num, &f),
            -1 => den = mul(&den, &f),
            _ => {}
        }
    }
    div_exact(&num, &den).expect("cyclotomic quotient is exact")
}

pub fn mobius(n: u64) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if m > 1 {
        r -= r / m;
    }
    r
}

/// Remainder of `a` modulo a monic polynomial `m`.
pub fn rem_monic(a: &[Integer], m: &[Integer]) -> Poly {
    let dm = degree(m) as usize;
    let mut r = trim(a.to_vec());
    while degree(&r) >= dm as isize {
        let dr = degree(&r) as usize;
        let c = r[dr].clone();
        let k = dr - dm;
        for (i, mc) in m.iter().enumerate() {
            r[i + k] -= Integer::from(&c * mc);
        }
        r = trim(r);
    }
    r
}

/// Rational roots by the rational root theorem (exact).
pub fn rational_roots(a: &[Integer]) -> Vec<Rational> {
    let mut p = primitive(a);
    let mut roots = Vec::new();
    if p.is_empty() {
        return roots;
    }
    let mut zero_mult = 0;
    while p.first().is_some_and(|c| c.is_zero()) {
        p.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push(Rational::new());
    }
    if degree(&p) < 1 {
        return roots;
    }
    let a0 = p[0].clone().abs();
    let ad = lead(&p).clone().abs();
    for num in int_divisors(&a0) {
        for den in int_divisors(&ad) {
            if num.clone().gcd(&den) != 1 {
                continue;
            }
            for s in [1, -1] {
                let q = Rational::from((Integer::from(&num * s), den.clone()));
                if eval_rational(&p, &q) == 0 {
                    roots.push(q);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Positive divisors of `|n|` by trial division (used only on small inputs).
pub fn int_divisors(n: &Integer) -> Vec<Integer> {
    let n = n.clone().abs();
    if n == 0 {
        return vec![Integer::from(1)];
    }
    let mut out = Vec::new();
    let mut d = Integer::from(1);
    while Integer::from(&d * &d) <= n {
        if n.is_divisible(&d) {
            out.push(d.clone());
            let e = Integer::from(n.div_exact_ref(&d));
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Sylvester-matrix resultant.
pub fn resultant(a: &[Integer], b: &[Integer]) -> Integer {
    let (da, db) = (degree(a), degree(b));
    if da < 0 || db < 0 {
        return Integer::new();
    }
    let (da, db) = (da as usize, db as usize);
    let n = da + db;
    if n == 0 {
        return Integer::from(1);
    }
    let mut s = matrix::zeros(n, n);
    for i in 0..db {
        for (j, c) in a.iter().take(da + 1).enumerate() {
            s[i][i + da - j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.iter().take(db + 1).enumerate() {
            s[db + i][i + db - j] = c.clone();
        }
    }
    matrix::det(&s)
}

/// Cauchy bound on the moduli of the roots.
pub fn root_bound(a: &[Integer]) -> f64 {
    let d = degree(a) as usize;
    let ld = a[d].to_f64().abs();
    1.0 + a[..d].iter().map(|c| c.to_f64().abs() / ld).fold(0.0, f64::max)
}

/// All complex roots with multiplicity, by Aberth–Ehrlich iteration at `prec` bits.
pub fn complex_roots(a: &[Integer], prec: u32) -> Result<Vec<Complex>> {
    let a = trim(a.to_vec());
    let d = degree(&a);
    if d < 1 {
        return Ok(Vec::new());
    }
    let d = d as usize;
    let wp = prec + 32;
    let da = derivative(&a);
    let radius = root_bound(&a).min(1e300);
    // distinct moduli break symmetry for polynomials like x^n - 1
    let mut z: Vec<Complex> = (0..d)
        .map(|k| {
            let ang = Float::with_val(wp, (k as f64 + 0.4) / d as f64);
            let r = Float::with_val(wp, radius * (0.5 + 0.5 * (k as f64 + 1.0) / (d as f64 + 1.0)));
            Complex::unit(wp, &ang).scale(&r)
        })
        .collect();
    if d == 1 {
        let r = Rational::from((Integer::from(-&a[0]), a[1].clone()));
        return Ok(vec![Complex::from_rational(prec, &r)]);
    }
    let tol = Float::with_val(wp, Float::i_exp(1, -(prec as i32) + 4));
    let mut converged = vec![false; d];
    for _ in 0..(60 * d + 2000) {
        let mut all = true;
        for k in 0..d {
            if converged[k] {
                continue;
            }
            let pv = eval_complex(&a, &z[k]);
            if pv.is_zero() {
                converged[k] = true;
                continue;
            }
            let dv = eval_complex(&da, &z[k]);
            let ratio = &pv / &dv;
            let mut s = Complex::zero(wp);
            for j in 0..d {
                if j != k {
                    s = s + (&z[k] - &z[j]).recip();
                }
            }
            let denom = Complex::one(wp) - &ratio * &s;
            let step = &ratio / &denom;
            let small = {
                let zk = z[k].abs().max(&Float::with_val(wp, 1));
                step.abs() <= Float::with_val(wp, &tol * &zk)
            };
            z[k] = &z[k] - &step;
            if small {
                converged[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Ok(z.into_iter().map(|c| c.with_prec(prec)).collect());
        }
    }
    Err(Error::Precision(format!(
        "root finder did not converge for a degree-{d} polynomial at {prec} bits"
    )))
}

/// Number of sign changes in a Sturm sequence evaluated at `x`.
fn sturm_changes(seq: &[Poly], x: &Rational) -> usize {
    let mut last = 0i32;
    let mut n = 0;
    for p in seq {
        let v = eval_rational(p, x);
        let s = v.cmp0() as i32;
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

fn sturm_sequence(a: &[Integer]) -> Vec<Poly> {
    let mut seq = vec![trim(a.to_vec()), derivative(a)];
    loop {
        let n = seq.len();
        if degree(&seq[n - 1]) < 1 {
            break;
        }
        // sign-correct pseudo remainder: lc^k > 0 up to an even power fix
        let (p, q) = (&seq[n - 2], &seq[n - 1]);
        let k = (degree(p) - degree(q) + 1) as u32;
        let mut r = pseudo_rem(p, q);
        if *lead(q) < 0 && k % 2 == 1 {
            r = neg(&r);
        }
        let r = neg(&r);
        if r.is_empty() {
            break;
        }
        // keep magnitudes small without changing signs
        let c = content(&r);
        seq.push(r.iter().map(|x| Integer::from(x.div_exact_ref(&c))).collect());
    }
    seq
}

/// Count of distinct real roots in the half-open interval `(lo, hi]`.
pub fn count_real_roots(a: &[Integer], lo: &Rational, hi: &Rational) -> usize {
    let sf = squarefree(a);
    if degree(&sf) < 1 {
        return 0;
    }
    let seq = sturm_sequence(&sf);
    sturm_changes(&seq, lo).saturating_sub(sturm_changes(&seq, hi))
}

/// Distinct real roots of a square-free polynomial, sorted, as `prec`-bit floats.
pub fn real_roots(a: &[Integer], prec: u32) -> Result<Vec<Float>> {
    let sf = squarefree(a);
    let d = degree(&sf);
    if d < 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for r in rational_roots(&sf) {
        out.push(Float::with_val(prec, &r));
    }
    let roots = complex_roots(&sf, prec)?;
    // imag part far below the separation scale means real; Sturm count confirms
    let bound = Rational::from_f64(root_bound(&sf) + 1.0).unwrap();
    let expected = count_real_roots(&sf, &Rational::from(-&bound), &bound);
    let mut cands: Vec<(f64, Float)> = roots
        .into_iter()
        .map(|z| (z.im.to_f64().abs(), z.re))
        .collect();
    cands.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut reals: Vec<Float> = cands.into_iter().take(expected).map(|(_, r)| r).collect();
    // rational roots are reported exactly; drop their numerical twins
    let rats = out.clone();
    reals.retain(|r| {
        !rats.iter().any(|q| {
            Float::with_val(prec, r - q).abs() < Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2))
        })
    });
    out.extend(reals);
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    if out.len() != expected {
        return Err(Error::Precision(format!(
            "real root isolation found {} roots, Sturm count is {expected}",
            out.len()
        )));
    }
    Ok(out)
}

fn round_to_integer(z: &Float) -> Integer {
    z.to_integer_round(rug::float::Round::Nearest).map(|(i, _)| i).unwrap_or_default()
}

/// Factors a primitive polynomial into irreducibles over `Z` (with multiplicity),
/// by recombining numerically computed roots and certifying each factor by exact division.
pub fn factor(a: &[Integer]) -> Result<Vec<(Poly, u32)>> {
    let mut rest = primitive(a);
    let mut out = Vec::new();
    if degree(&rest) < 1 {
        return Ok(out);
    }
    // x-power factor
    let mut xm = 0;
    while rest[0].is_zero() {
        rest.remove(0);
        xm += 1;
    }
    if xm > 0 {
        out.push((from_i64(&[0, 1]), xm));
    }
    for f in factor_squarefree(&squarefree(&rest))? {
        let mut m = 0;
        while let Some(q) = div_exact(&rest, &f) {
            rest = q;
            m += 1;
        }
        out.push((f, m));
    }
    out.sort_by(|x, y| degree(&x.0).cmp(&degree(&y.0)).then_with(|| x.0.cmp(&y.0)));
    Ok(out)
}

/// Irreducible factors of a primitive square-free polynomial.
pub fn factor_squarefree(a: &[Integer]) -> Result<Vec<Poly>> {
    let a = primitive(a);
    let d = degree(&a);
    if d < 1 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(vec![a]);
    }
    let mut factors = Vec::new();
    let mut rest = a;
    for r in rational_roots(&rest) {
        let lin = primitive(&[Integer::from(-r.numer()), r.denom().clone()]);
        rest = div_exact(&rest, &lin).expect("rational root factor");
        factors.push(lin);
    }
    if degree(&rest) >= 1 {
        factors.extend(recombine(&rest)?);
    }
    factors.sort();
    Ok(factors)
}

const MAX_FACTOR_DEGREE: usize = 40;
const MAX_SUBSETS: usize = 400_000;

fn recombine(a: &[Integer]) -> Result<Vec<Poly>> {
    let d = degree(a) as usize;
    if d > MAX_FACTOR_DEGREE {
        return Err(Error::ResourceBound {
            what: "factorization degree".into(),
            limit: MAX_FACTOR_DEGREE as u64,
            hint: "reduce the degree of the input polynomial".into(),
        });
    }
    // Mignotte-type bound on factor coefficients decides the precision
    let norm: Integer = a.iter().map(|c| Integer::from(c.square_ref())).sum();
    let bits = norm.significant_bits() / 2 + d as u32 + lead(a).significant_bits() + 64;
    let prec = bits.max(128);
    let roots = complex_roots(a, prec)?;
    let lc = lead(a).clone();
    let mut remaining: Vec<Complex> = roots;
    let mut rest = a.to_vec();
    let mut factors = Vec::new();
    let mut tried = 0usize;
    'outer: while degree(&rest) >= 1 {
        let n = remaining.len();
        for size in 1..=n / 2 {
            // subsets containing index 0
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                tried += 1;
                if tried > MAX_SUBSETS {
                    return Err(Error::ResourceBound {
                        what: "factor recombination subsets".into(),
                        limit: MAX_SUBSETS as u64,
                        hint: "polynomial has too many roots to recombine".into(),
                    });
                }
                if let Some(f) = try_subset(&remaining, &idx, &lc, prec) {
                    if let Some(q) = div_exact(&rest, &f) {
                        rest = q;
                        let mut k = 0;
                        remaining.retain(|_| {
                            let keep = !idx.contains(&k);
                            k += 1;
                            keep
                        });
                        factors.push(f);
                        continue 'outer;
                    }
                }
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
        }
        factors.push(primitive(&rest));
        break;
    }
    Ok(factors)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    // index 0 stays fixed
    let k = idx.len();
    let mut i = k;
    while i > 1 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn try_subset(roots: &[Complex], idx: &[usize], lc: &Integer, prec: u32) -> Option<Poly> {
    let mut coeffs = vec![Complex::from_real(Float::with_val(prec, lc))];
    for &i in idx {
        let r = &roots[i];
        let mut next = vec![Complex::zero(prec); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * r);
        }
        coeffs = next;
    }
    let tol = Float::with_val(prec, 1e-6);
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if c.im.clone().abs() > tol {
            return None;
        }
        let r = round_to_integer(&c.re);
        if Float::with_val(prec, &c.re - &r).abs() > tol {
            return None;
        }
        ints.push(r);
    }
    let p = primitive(&ints);
    (degree(&p) >= 1).then_some(p)
}

pub fn is_irreducible(a: &[Integer]) -> Result<bool> {
    let p = primitive(a);
    if degree(&p) < 1 {
        return Ok(false);
    }
    if content(a) != 1 && degree(a) >= 1 {
        // content > 1 is a nonunit constant factor
        return Ok(false);
    }
    let f = factor(&p)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

pub fn to_string(a: &[Integer], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in a.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let term = if mono.is_empty() {
            c.to_string()
        } else if *c == 1 {
            mono
        } else if *c == -1 {
            format!("-{mono}")
        } else {
            format!("{c}*{mono}")
        };
        terms.push(term);
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = terms[0].clone();
    for t in &terms[1..] {
        if let Some(rest) = t.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(t);
        }
    }
    s
}

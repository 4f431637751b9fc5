//! Exact linear algebra for the attack: rational matrix inversion,
//! Faddeev-LeVerrier characteristic polynomials, and integer root
//! location. Matrix entries are hundreds of bits wide, so everything
//! here is exact; no floating point is involved anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type RationalMatrix = Vec<Vec<BigRational>>;

pub fn from_integers(m: &[Vec<BigInt>]) -> RationalMatrix {
    m.iter()
        .map(|row| row.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect()
}

/// Gauss-Jordan inverse; `None` if singular.
pub fn invert(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.len();
    let mut work = m.to_vec();
    let mut inv: RationalMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = work[col][col].clone();
        for j in 0..n {
            work[col][j] /= &pivot;
            inv[col][j] /= &pivot;
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for j in 0..n {
                let w = &work[col][j] * &factor;
                work[r][j] -= w;
                let v = &inv[col][j] * &factor;
                inv[r][j] -= v;
            }
        }
    }
    Some(inv)
}

pub fn multiply(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Characteristic polynomial by Faddeev-LeVerrier. Returns monic
/// coefficients in descending degree order: `[1, c_1, ..., c_n]` with
/// `p(x) = x^n + c_1 x^(n-1) + ... + c_n`.
pub fn charpoly(v: &RationalMatrix) -> Vec<BigRational> {
    let n = v.len();
    let mut coeffs = vec![BigRational::one()];
    // M_1 = V, c_1 = -tr(M_1); M_{k+1} = V (M_k + c_k I)
    let mut m = v.clone();
    for k in 1..=n {
        let trace: BigRational = (0..n).map(|i| m[i][i].clone()).sum();
        let c = -trace / BigRational::from_integer(BigInt::from(k));
        coeffs.push(c.clone());
        if k < n {
            let mut shifted = m.clone();
            for (i, row) in shifted.iter_mut().enumerate().take(n) {
                row[i] += &c;
            }
            m = multiply(v, &shifted);
        }
    }
    coeffs
}

/// Characteristic polynomial coerced to integers; `None` if any
/// coefficient has a nontrivial denominator.
pub fn charpoly_integer(v: &RationalMatrix) -> Option<Vec<BigInt>> {
    charpoly(v)
        .into_iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

const FILTER_MODULUS: u64 = (1 << 61) - 1; // Mersenne prime

fn reduce_coeff(c: &BigInt, m: u64) -> u64 {
    let m_big = BigInt::from(m);
    let r = ((c % &m_big) + &m_big) % &m_big;
    let digits = r.to_u64_digits().1;
    digits.first().copied().unwrap_or(0)
}

/// All integer roots of a polynomial (descending coefficients) in the
/// open interval `(-2^bound_bits, 2^bound_bits)`, found by interval
/// scan with a modular prefilter.
pub fn integer_roots_in_range(coeffs: &[BigInt], bound_bits: u64) -> Vec<BigInt> {
    assert!(bound_bits <= 24, "scan bound too wide: {bound_bits} bits");
    let m = FILTER_MODULUS;
    let small: Vec<u64> = coeffs.iter().map(|c| reduce_coeff(c, m)).collect();
    let bound = 1i64 << bound_bits;
    let mut roots = Vec::new();
    for x in -(bound - 1)..bound {
        let xm = if x >= 0 { x as u64 % m } else { m - ((-x) as u64 % m) };
        let mut acc: u64 = 0;
        for &c in &small {
            acc = ((acc as u128 * xm as u128 + c as u128) % m as u128) as u64;
        }
        if acc != 0 {
            continue;
        }
        // exact confirmation
        let xb = BigInt::from(x);
        let mut exact = BigInt::zero();
        for c in coeffs {
            exact = exact * &xb + c;
        }
        if exact.is_zero() {
            roots.push(xb);
        }
    }
    roots
}

/// Evaluate a polynomial given by descending coefficients.
pub fn eval_poly(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs {
        acc = acc * x + c;
    }
    acc
}

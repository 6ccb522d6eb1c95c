//! Permutations of `0..k` with their cycle structure, and the trace sum
//! `Ψ_k(A_1, ..., A_k) = Σ_σ sign(σ) Π_{cycles c of σ} tr(Π_{i ∈ c} A_i)`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Largest `k` accepted by [`psi`]; the sum has `k!` terms.
pub const PSI_LIMIT: usize = 8;

/// All permutations of `0..k` in lexicographic order, as images `σ(i)`.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..k).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Cycles `(i, σ(i), σ²(i), ...)`, each starting at its smallest element.
pub fn cycles(sigma: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; sigma.len()];
    let mut out = Vec::new();
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut c = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = sigma[i];
        }
        out.push(c);
    }
    out
}

/// `+1` or `-1`.
pub fn sign(sigma: &[usize]) -> i64 {
    let even_cycles = cycles(sigma).iter().filter(|c| c.len() % 2 == 0).count();
    if even_cycles % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_σ sign(σ) Π_c f(c)` for an arbitrary per-cycle weight.
pub fn signed_cycle_sum<T: Scalar>(
    k: usize,
    mut f: impl FnMut(&[usize]) -> Result<T>,
) -> Result<T> {
    if k > PSI_LIMIT {
        return Err(Error::TooLarge {
            what: "number of matrices in the permutation sum",
            got: k,
            limit: PSI_LIMIT,
        });
    }
    let mut total = T::zero();
    for sigma in permutations(k) {
        let mut term = T::from_i64(sign(&sigma));
        for c in cycles(&sigma) {
            term = term * &f(&c)?;
        }
        total = total + term;
    }
    Ok(total)
}

pub fn psi<T: Scalar>(matrices: &[Matrix<T>]) -> Result<T> {
    signed_cycle_sum(matrices.len(), |c| {
        let mut m = matrices[c[0]].clone();
        for &i in &c[1..] {
            m = m.checked_mul(&matrices[i])?;
        }
        Ok(m.trace())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn counts_and_signs() {
        for k in 0..6 {
            let perms = permutations(k);
            assert_eq!(perms.len(), (1..=k).product::<usize>());
            let total: i64 = perms.iter().map(|p| sign(p)).sum();
            assert_eq!(total, if k <= 1 { 1 } else { 0 });
        }
        assert_eq!(cycles(&[1, 2, 0, 3]), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn psi_small_cases() {
        let a = Matrix::<Rational>::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let b = Matrix::<Rational>::from_i64_rows(&[&[0, 1], &[5, -2]]);
        assert_eq!(psi(&[a.clone()]).unwrap(), a.trace());
        let want = a.trace() * b.trace() - (&a * &b).trace();
        assert_eq!(psi(&[a, b]).unwrap(), want);
        assert_eq!(psi::<Rational>(&[]).unwrap(), rat(1, 1));
    }

    #[test]
    fn psi_guard() {
        let m = vec![Matrix::<Rational>::identity(1); 9];
        assert!(matches!(psi(&m), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn psi_of_scalars_is_determinant_like() {
        // for 1x1 matrices Ψ_k(a_1..a_k) = Σ sign(σ) Π a_i = 0 when k >= 2
        let m: Vec<_> = (1..=4)
            .map(|i| Matrix::<Rational>::from_i64_rows(&[&[i]]))
            .collect();
        assert_eq!(psi(&m).unwrap(), rat(0, 1));
    }
}

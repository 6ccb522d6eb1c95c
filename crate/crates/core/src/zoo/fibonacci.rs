//! q-deformed Fibonacci continuants with a matrix argument `Q`.
//!
//! With `B_i = C_i = I` and `A_i = Q` for even `i`, `A_i = Q^{-1}` for odd
//! `i`, the expected multiplicity of the leftmost vertical edge of `G_N`
//! is `tr(Q F~_N(Q) F_{N+1}(Q)^{-1})`.

use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;
use crate::matrix::Matrix;
use crate::scalar::Field;

use super::grid::GridSpec;

/// `F_0 = F_1 = I`; `F_n = Q F_{n-1} + F_{n-2}` for even `n` and
/// `F_n = F_{n-1} + Q^2 F_{n-2}` for odd `n`.
pub fn q_fibonacci<T: Field>(n: usize, q: &Matrix<T>) -> Matrix<T> {
    let id = Matrix::identity(q.rows());
    let q2 = q * q;
    let (mut prev, mut cur) = (id.clone(), id);
    for k in 2..=n {
        let next = if k % 2 == 0 {
            &(q * &cur) + &prev
        } else {
            &cur + &(&q2 * &prev)
        };
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `F~_1 = I`, `F~_2 = I + Q`; for `n >= 3`, `F~_n = F~_{n-1} + Q^2 F~_{n-2}`
/// for even `n` and `F~_n = Q F~_{n-1} + F~_{n-2}` for odd `n`.
///
/// `n = 0` is rejected.
pub fn q_fibonacci_tilde<T: Field>(n: usize, q: &Matrix<T>) -> Result<Matrix<T>> {
    if n == 0 {
        return Err(Error::IndexOutOfRange {
            op: "q_fibonacci_tilde",
            index: 0,
            size: 0,
        });
    }
    let id = Matrix::identity(q.rows());
    if n == 1 {
        return Ok(id);
    }
    let q2 = q * q;
    let (mut prev, mut cur) = (id.clone(), &id + q);
    for k in 3..=n {
        let next = if k % 2 == 0 {
            &cur + &(&q2 * &prev)
        } else {
            &(q * &cur) + &prev
        };
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// The q-weighted grid `G_N` and the closed-form expected multiplicity of
/// its leftmost vertical edge `v0`.
pub fn q_fibonacci_grid<T: Field>(big_n: usize, q: &Matrix<T>) -> Result<(EmbeddedGraph<T>, T)> {
    if big_n == 0 {
        return Err(Error::Unsupported(
            "the q-Fibonacci grid needs N >= 1".into(),
        ));
    }
    let q_inv = q.inverse()?;
    let mut spec = GridSpec::uniform(big_n, q.rows());
    for (k, a) in spec.upper.iter_mut().enumerate() {
        *a = if (k + 1) % 2 == 0 {
            q.clone()
        } else {
            q_inv.clone()
        };
    }
    let tilde = q_fibonacci_tilde(big_n, q)?;
    let f_inv = q_fibonacci(big_n + 1, q).inverse()?;
    let expected = (&(q * &tilde) * &f_inv).trace();
    Ok((spec.build()?, expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn scalar(q: Rational) -> Matrix<Rational> {
        Matrix::from_fn(1, 1, |_, _| q.clone())
    }

    #[test]
    fn q_one_is_fibonacci() {
        let one = scalar(rat(1, 1));
        let fib = [1i64, 1, 2, 3, 5, 8, 13, 21, 34];
        for (n, &f) in fib.iter().enumerate() {
            assert_eq!(q_fibonacci(n, &one)[(0, 0)], rat(f, 1));
        }
        for n in 1..8 {
            assert_eq!(q_fibonacci_tilde(n, &one).unwrap()[(0, 0)], rat(fib[n], 1));
        }
    }

    #[test]
    fn square_case() {
        // N = 1: the left vertical edge is used with probability q/(q+1)
        let q = rat(2, 1);
        let (_, e) = q_fibonacci_grid(1, &scalar(q)).unwrap();
        assert_eq!(e, rat(2, 3));
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::group::FgAbGroup;
use super::matrix::IntMatrix;

/// Result of diagonalizing a presentation matrix.
///
/// `u * presentation * v == d` with `u`, `v` unimodular and the diagonal of `d`
/// forming a divisibility chain. The group is the cokernel Z^rows / im(presentation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub group: FgAbGroup,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// Diagonal entries of `d` (length min(rows, cols)), zeros included.
    pub diagonal: Vec<BigInt>,
    /// Source row of `d` for each free, 2-primary and odd factor, in group order.
    factor_rows: Vec<FactorSource>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum FactorSource {
    Free(usize),
    Torsion { row: usize, modulus: BigInt },
}

impl SnfDecomposition {
    /// Coordinates in the decomposed group of the class of `v` in Z^rows.
    pub fn project(&self, v: &[BigInt]) -> Result<super::GroupElement, super::FgabError> {
        let w = self.u.mul_vec(v)?;
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for src in &self.factor_rows {
            match src {
                FactorSource::Free(r) => free.push(w[*r].clone()),
                FactorSource::Torsion { row, modulus } => torsion.push(w[*row].mod_floor(modulus)),
            }
        }
        let split = self.group.two_primary().len();
        let odd = torsion.split_off(split);
        self.group.element(free, torsion, odd)
    }
}

/// Smith normal form with transform witnesses.
pub fn snf_decompose(presentation: &IntMatrix) -> SnfDecomposition {
    let m = presentation.rows();
    let n = presentation.cols();
    let mut d = presentation.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pr, pc)) = smallest_nonzero(&d, t) else {
                break;
            };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let pivot = d.get(t, t).clone();
            for i in t + 1..m {
                let q = d.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    d.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-q);
                }
            }
            for j in t + 1..n {
                let q = d.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    d.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-q);
                }
            }
            let dirty = (t + 1..m).any(|i| !d.get(i, t).is_zero())
                || (t + 1..n).any(|j| !d.get(t, j).is_zero());
            if dirty {
                continue;
            }
            let bad_row = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot))
            });
            match bad_row {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    let diagonal: Vec<BigInt> = (0..m.min(n)).map(|i| d.get(i, i).clone()).collect();
    let (group, factor_rows) = decompose(m, &diagonal);
    SnfDecomposition { group, u, v, d, diagonal, factor_rows }
}

fn smallest_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in t..d.rows() {
        for c in t..d.cols() {
            let e = d.get(r, c);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            if best.as_ref().map_or(true, |(_, _, b)| a < *b) {
                best = Some((r, c, a));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

fn decompose(rows: usize, diagonal: &[BigInt]) -> (FgAbGroup, Vec<FactorSource>) {
    let mut free_rows = Vec::new();
    let mut two = Vec::new();
    let mut two_src = Vec::new();
    let mut odd = Vec::new();
    let mut odd_src = Vec::new();
    for r in 0..rows {
        let dr = diagonal.get(r).cloned().unwrap_or_else(BigInt::zero);
        if dr.is_zero() {
            free_rows.push(FactorSource::Free(r));
            continue;
        }
        if dr.is_one() {
            continue;
        }
        let (p, rest) = split_two(&dr);
        if p > 0 {
            two.push(p);
            two_src.push(FactorSource::Torsion { row: r, modulus: BigInt::one() << p });
        }
        for qpow in odd_prime_powers(&rest) {
            odd_src.push(FactorSource::Torsion { row: r, modulus: qpow.clone() });
            odd.push(qpow);
        }
    }
    let group = FgAbGroup::new(free_rows.len(), two, odd).expect("factors from SNF are valid");
    let mut sources = free_rows;
    sources.extend(two_src);
    sources.extend(odd_src);
    (group, sources)
}

fn split_two(d: &BigInt) -> (u32, BigInt) {
    let mut x = d.abs();
    let mut p = 0;
    while x.is_even() {
        x >>= 1;
        p += 1;
    }
    (p, x)
}

/// Prime-power factors of an odd positive integer, ascending by prime.
pub(crate) fn odd_prime_powers(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut x = n.abs();
    let mut f = BigInt::from(3);
    while &f * &f <= x {
        if x.is_multiple_of(&f) {
            let mut pw = BigInt::one();
            while x.is_multiple_of(&f) {
                x /= &f;
                pw *= &f;
            }
            out.push(pw);
        }
        f += 2;
    }
    if x > BigInt::one() {
        out.push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntMatrix) -> SnfDecomposition {
        let s = snf_decompose(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert!(s.d.is_diagonal());
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        for w in s.diagonal.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        assert!(s.diagonal.iter().all(|x| !x.is_negative()));
        s
    }

    #[test]
    fn identity_is_trivial() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
        assert_eq!(s.group, FgAbGroup::trivial());
    }

    #[test]
    fn diag_2_3_is_z6() {
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]).unwrap());
        assert_eq!(s.diagonal, bi(&[1, 6]));
        assert_eq!(s.group.two_primary(), &[1]);
        assert_eq!(s.group.odd_orders(), &bi(&[3])[..]);
    }

    #[test]
    fn diag_2_4_keeps_chain() {
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 4]).unwrap());
        assert_eq!(s.diagonal, bi(&[2, 4]));
        assert_eq!(s.group.two_primary(), &[1, 2]);
        assert!(s.group.odd_orders().is_empty());
    }

    #[test]
    fn rectangular_and_zero() {
        let s = check(&IntMatrix::from_i64(3, 1, &[4, 6, 0]).unwrap());
        assert_eq!(s.diagonal, bi(&[2]));
        assert_eq!(s.group.free_rank(), 2);
        let z = check(&IntMatrix::zeros(2, 3));
        assert_eq!(z.group.free_rank(), 2);
        let e = check(&IntMatrix::zeros(3, 0));
        assert_eq!(e.group.free_rank(), 3);
    }

    #[test]
    fn odd_splitting() {
        assert_eq!(odd_prime_powers(&BigInt::from(45)), bi(&[9, 5]));
        assert_eq!(odd_prime_powers(&BigInt::from(1)), Vec::<BigInt>::new());
        let s = check(&IntMatrix::from_i64(1, 1, &[-360]).unwrap());
        assert_eq!(s.group.two_primary(), &[3]);
        assert_eq!(s.group.odd_orders(), &bi(&[9, 5])[..]);
    }

    #[test]
    fn projection_respects_relations() {
        let a = IntMatrix::from_i64(2, 2, &[2, 1, 0, 3]).unwrap();
        let s = check(&a);
        // Columns of the presentation are relations, so they project to zero.
        for c in 0..2 {
            let col: Vec<BigInt> = (0..2).map(|r| a.get(r, c).clone()).collect();
            assert!(s.group.is_zero(&s.project(&col).unwrap()));
        }
        // (1,0) is killed by the first relation twice; (0,1) generates.
        let e0 = s.project(&bi(&[1, 0])).unwrap();
        assert_eq!(s.group.order_of(&e0), Some(BigInt::from(2)));
        let e1 = s.project(&bi(&[0, 1])).unwrap();
        assert_eq!(s.group.order_of(&e1), Some(BigInt::from(6)));
    }
}

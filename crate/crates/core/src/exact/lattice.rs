use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer row lattice kept in row-style Hermite normal form.
///
/// Rows are in echelon form with strictly increasing pivot columns, each
/// pivot is positive, and the entries above a pivot lie in `[0, pivot)`.
/// Two generating sets span the same lattice iff their normal forms are
/// equal, so derived equality is lattice equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntLattice {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntLattice {
    /// Normal form of the span of `rows`. Zero rows are dropped.
    pub fn hnf<I>(dim: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<BigInt>>,
    {
        let mut m: Vec<Vec<BigInt>> = rows
            .into_iter()
            .inspect(|r| assert_eq!(r.len(), dim, "row length differs from lattice dimension"))
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        let mut rank = 0;
        for col in 0..dim {
            if rank == m.len() {
                break;
            }
            // Euclid on column `col` over rows rank.. until a single nonzero entry remains.
            loop {
                let pivot = (rank..m.len())
                    .filter(|&i| !m[i][col].is_zero())
                    .min_by(|&i, &j| m[i][col].abs().cmp(&m[j][col].abs()));
                let Some(p) = pivot else { break };
                m.swap(rank, p);
                let mut clean = true;
                for i in rank + 1..m.len() {
                    if m[i][col].is_zero() {
                        continue;
                    }
                    let q = m[i][col].div_floor(&m[rank][col]);
                    let (head, tail) = m.split_at_mut(i);
                    sub_multiple(&mut tail[0], &q, &head[rank]);
                    if !tail[0][col].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    if m[rank][col].is_negative() {
                        m[rank].iter_mut().for_each(|x| *x = -&*x);
                    }
                    for i in 0..rank {
                        let q = m[i][col].div_floor(&m[rank][col]);
                        if !q.is_zero() {
                            let (head, tail) = m.split_at_mut(rank);
                            sub_multiple(&mut head[i], &q, &tail[0]);
                        }
                    }
                    rank += 1;
                    break;
                }
            }
        }
        m.truncate(rank);
        debug_assert!(m.iter().all(|r| r.iter().any(|x| !x.is_zero())));
        IntLattice { dim, rows: m }
    }

    pub fn zero(dim: usize) -> Self {
        IntLattice { dim, rows: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).unwrap())
            .collect()
    }

    /// Whether `v` is an integer combination of the basis rows
    /// (back-substitution against the echelon form).
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length differs from lattice dimension");
        let mut rest = v.to_vec();
        for (row, p) in self.rows.iter().zip(self.pivots()) {
            if rest[..p].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return false;
            }
            if !q.is_zero() {
                sub_multiple(&mut rest, &q, row);
            }
        }
        rest.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &IntLattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &IntLattice) -> IntLattice {
        assert_eq!(self.dim, other.dim);
        IntLattice::hnf(self.dim, self.rows.iter().chain(other.rows.iter()).cloned())
    }

    /// Intersection by the Zassenhaus construction: reduce the rows `[b | b]`
    /// for `b` in `self` together with `[c | 0]` for `c` in `other`; the rows
    /// whose left half vanishes span the intersection in their right half.
    pub fn intersect(&self, other: &IntLattice) -> IntLattice {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let zeros = vec![BigInt::zero(); n];
        let stacked = self
            .rows
            .iter()
            .map(|b| [b.as_slice(), b.as_slice()].concat())
            .chain(other.rows.iter().map(|c| [c.as_slice(), zeros.as_slice()].concat()));
        let joint = IntLattice::hnf(2 * n, stacked);
        let meet = joint
            .rows
            .into_iter()
            .filter(|r| r[..n].iter().all(Zero::is_zero))
            .map(|r| r[n..].to_vec());
        IntLattice::hnf(n, meet)
    }

    /// Index in Z^dim (absolute determinant) for a full-rank lattice.
    pub fn index(&self) -> Option<BigInt> {
        (self.rank() == self.dim).then(|| {
            self.rows
                .iter()
                .enumerate()
                .fold(BigInt::one(), |acc, (i, r)| acc * &r[i])
        })
    }

    /// gcd of all basis entries.
    pub fn content(&self) -> BigInt {
        self.rows
            .iter()
            .flatten()
            .fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }
}

fn sub_multiple(target: &mut [BigInt], q: &BigInt, row: &[BigInt]) {
    for (t, r) in target.iter_mut().zip(row) {
        *t -= q * r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn vec(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_examples() {
        let l = IntLattice::hnf(2, rows(&[&[2, 0], &[0, 2], &[1, 1]]));
        assert_eq!(l.rows(), rows(&[&[1, 1], &[0, 2]]).as_slice());
        let id = IntLattice::hnf(2, rows(&[&[1, 0], &[0, 1]]));
        assert_eq!(id.rows(), rows(&[&[1, 0], &[0, 1]]).as_slice());
        let g = IntLattice::hnf(2, rows(&[&[4, 0], &[6, 0]]));
        assert_eq!(g.rows(), rows(&[&[2, 0]]).as_slice());
        assert_eq!(IntLattice::hnf(3, rows(&[&[0, 0, 0]])).rank(), 0);
    }

    #[test]
    fn reduction_above_pivots() {
        let l = IntLattice::hnf(2, rows(&[&[1, 7], &[0, 3]]));
        assert_eq!(l.rows(), rows(&[&[1, 1], &[0, 3]]).as_slice());
        let n = IntLattice::hnf(2, rows(&[&[-1, -7], &[0, -3]]));
        assert_eq!(n, l);
    }

    #[test]
    fn membership_examples() {
        let l = IntLattice::hnf(2, rows(&[&[1, 1], &[0, 2]]));
        assert!(l.contains(&vec(&[2, 2])));
        assert!(l.contains(&vec(&[3, 1])));
        assert!(!l.contains(&vec(&[1, 0])));
        let g = IntLattice::hnf(2, rows(&[&[2, 0]]));
        assert!(!g.contains(&vec(&[1, 0])));
        assert!(!g.contains(&vec(&[2, 1])));
    }

    #[test]
    fn intersection_and_index() {
        let a = IntLattice::hnf(2, rows(&[&[2, 0], &[0, 1]]));
        let b = IntLattice::hnf(2, rows(&[&[1, 0], &[0, 3]]));
        let m = a.intersect(&b);
        assert_eq!(m.rows(), rows(&[&[2, 0], &[0, 3]]).as_slice());
        assert_eq!(m.index(), Some(BigInt::from(6)));
        assert_eq!(a.sum(&b).index(), Some(BigInt::one()));
        let line = IntLattice::hnf(2, rows(&[&[1, 1]]));
        assert_eq!(line.intersect(&a).rows(), rows(&[&[2, 2]]).as_slice());
    }
}

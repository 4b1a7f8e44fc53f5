//! Dense linear algebra over F_p.

use super::field::FieldSpec;

/// Row-reduced echelon form of a set of vectors, kept together with the
/// combinations of the input rows that produced each reduced row.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    /// Reduced rows, each with a distinct pivot column and pivot entry 1.
    pub rows: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
    /// `combos[k]` expresses `rows[k]` in terms of the inputs.
    pub combos: Vec<Vec<u32>>,
    /// Input combinations that vanish (a basis of the left kernel).
    pub kernel: Vec<Vec<u32>>,
}

impl Echelon {
    pub fn new(field: FieldSpec, input: &[Vec<u32>], ncols: usize) -> Self {
        let n = input.len();
        let mut e = Echelon {
            field,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            kernel: Vec::new(),
        };
        for (k, row) in input.iter().enumerate() {
            let mut r = row.clone();
            r.resize(ncols, 0);
            let mut c = vec![0u32; n];
            c[k] = 1;
            e.absorb(r, c);
        }
        e
    }

    fn absorb(&mut self, mut r: Vec<u32>, mut c: Vec<u32>) {
        let f = self.field;
        for (k, &p) in self.pivots.iter().enumerate() {
            let a = r[p];
            if a != 0 {
                let na = f.neg(a);
                for (x, y) in r.iter_mut().zip(&self.rows[k]) {
                    *x = f.add(*x, f.mul(na, *y));
                }
                for (x, y) in c.iter_mut().zip(&self.combos[k]) {
                    *x = f.add(*x, f.mul(na, *y));
                }
            }
        }
        match r.iter().position(|&a| a != 0) {
            None => self.kernel.push(c),
            Some(p) => {
                let inv = f.inv(r[p]);
                for x in r.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                for x in c.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                // keep earlier rows reduced against the new pivot
                for k in 0..self.rows.len() {
                    let a = self.rows[k][p];
                    if a != 0 {
                        let na = f.neg(a);
                        let (row, combo) = (r.clone(), c.clone());
                        for (x, y) in self.rows[k].iter_mut().zip(&row) {
                            *x = f.add(*x, f.mul(na, *y));
                        }
                        for (x, y) in self.combos[k].iter_mut().zip(&combo) {
                            *x = f.add(*x, f.mul(na, *y));
                        }
                    }
                }
                self.rows.push(r);
                self.combos.push(c);
                self.pivots.push(p);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coordinates of `v` in terms of the reduced rows, or `None` if `v` is
    /// not in their span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let f = self.field;
        let mut r = v.to_vec();
        let mut coords = vec![0u32; self.rows.len()];
        for (k, &p) in self.pivots.iter().enumerate() {
            let a = r.get(p).copied().unwrap_or(0);
            if a != 0 {
                coords[k] = a;
                let na = f.neg(a);
                for (x, y) in r.iter_mut().zip(&self.rows[k]) {
                    *x = f.add(*x, f.mul(na, *y));
                }
            }
        }
        r.iter().all(|&a| a == 0).then_some(coords)
    }

    /// Reduces `v` modulo the row space; the result is zero on every pivot column.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut r = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let a = r[p];
            if a != 0 {
                let na = f.neg(a);
                for (x, y) in r.iter_mut().zip(&self.rows[k]) {
                    *x = f.add(*x, f.mul(na, *y));
                }
            }
        }
        r
    }
}

pub fn rank(field: FieldSpec, rows: &[Vec<u32>], ncols: usize) -> usize {
    Echelon::new(field, rows, ncols).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_dependent_rows() {
        let f = FieldSpec::new(5).unwrap();
        let rows = vec![vec![1, 2, 0], vec![2, 4, 0], vec![0, 1, 1]];
        let e = Echelon::new(f, &rows, 3);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.kernel.len(), 1);
        let k = &e.kernel[0];
        for c in 0..3 {
            let s = (0..3).fold(0, |acc, r| f.add(acc, f.mul(k[r], rows[r][c])));
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let f = FieldSpec::new(7).unwrap();
        let rows = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let e = Echelon::new(f, &rows, 3);
        assert!(e.coordinates(&[1, 2, 1]).is_some());
        assert!(e.coordinates(&[0, 0, 1]).is_none());
    }
}

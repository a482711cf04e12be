//! Linear algebra and polynomials over `F_p`, `p < 2^31`.

use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < 1 << 31);
        Fp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// A primitive `e`-th root of unity; requires `e | p - 1`.
    pub fn primitive_root_of_unity(self, e: u64) -> u64 {
        let p = self.p;
        let primes = crate::arith::prime_divisors(p - 1);
        let gen = (2..p)
            .find(|&g| primes.iter().all(|&q| self.pow(g, (p - 1) / q) != 1))
            .expect("prime field has a generator");
        self.pow(gen, (p - 1) / e)
    }

    /// Row-reduces in place, returning pivot columns. Rows end up in reduced
    /// echelon form with the zero rows removed.
    pub fn rref(self, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
                continue;
            };
            rows.swap(r, k);
            let iv = self.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, iv);
            }
            let pivot_row = rows[r].clone();
            for (k, row) in rows.iter_mut().enumerate() {
                if k != r && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot_row) {
                        *x = self.sub(*x, self.mul(f, y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    /// Basis of `{x : M x = 0}` for a square or rectangular `M`.
    pub fn kernel(self, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let ncols = m.first().map_or(0, |r| r.len());
        let mut rows = m.to_vec();
        let pivots = self.rref(&mut rows);
        let mut out = Vec::new();
        for free in (0..ncols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; ncols];
            v[free] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = self.neg(row[free]);
            }
            out.push(v);
        }
        out
    }

    pub fn mat_vec(self, a: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
        a.iter()
            .map(|row| row.iter().zip(v).fold(0, |s, (&x, &y)| (s + x * y) % self.p))
            .collect()
    }

    /// Minimal polynomial of `v` under `a` (monic, lowest degree first).
    pub fn krylov_min_poly(self, a: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
        let n = v.len();
        // Reduced Krylov vectors with their expressions in the power basis.
        let mut basis: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
        let mut w = v.to_vec();
        for t in 0..=n {
            let mut red = w.clone();
            let mut coef = vec![0u64; t + 1];
            coef[t] = 1;
            for (pc, bv, bc) in &basis {
                let f = red[*pc];
                if f != 0 {
                    for (x, &y) in red.iter_mut().zip(bv) {
                        *x = self.sub(*x, self.mul(f, y));
                    }
                    for (x, &y) in coef.iter_mut().zip(bc) {
                        *x = self.sub(*x, self.mul(f, y));
                    }
                }
            }
            match red.iter().position(|&x| x != 0) {
                None => return coef,
                Some(pc) => {
                    let iv = self.inv(red[pc]);
                    for x in red.iter_mut() {
                        *x = self.mul(*x, iv);
                    }
                    for x in coef.iter_mut() {
                        *x = self.mul(*x, iv);
                    }
                    basis.push((pc, red, coef));
                }
            }
            w = self.mat_vec(a, &w);
        }
        unreachable!("Krylov sequence of length n + 1 is dependent")
    }

    fn trim(self, f: &mut Vec<u64>) {
        while f.last() == Some(&0) {
            f.pop();
        }
    }

    fn monic(self, mut f: Vec<u64>) -> Vec<u64> {
        self.trim(&mut f);
        if let Some(&l) = f.last() {
            let iv = self.inv(l);
            for x in f.iter_mut() {
                *x = self.mul(*x, iv);
            }
        }
        f
    }

    /// `(quotient, remainder)` of `f / g`, `g` nonzero.
    pub fn poly_divmod(self, f: &[u64], g: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let mut r = f.to_vec();
        self.trim(&mut r);
        let mut g = g.to_vec();
        self.trim(&mut g);
        let dg = g.len() - 1;
        let il = self.inv(g[dg]);
        if r.len() < g.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0; r.len() - dg];
        for i in (0..q.len()).rev() {
            let c = self.mul(r[i + dg], il);
            q[i] = c;
            if c != 0 {
                for (j, &b) in g.iter().enumerate() {
                    r[i + j] = self.sub(r[i + j], self.mul(c, b));
                }
            }
        }
        r.truncate(dg);
        self.trim(&mut r);
        (q, r)
    }

    fn poly_mulmod(self, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.poly_divmod(&prod, m).1
    }

    pub fn poly_gcd(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        self.trim(&mut a);
        self.trim(&mut b);
        while !b.is_empty() {
            let r = self.poly_divmod(&a, &b).1;
            a = b;
            b = r;
        }
        self.monic(a)
    }

    /// Roots of a polynomial known to split into distinct linear factors.
    pub fn split_roots<R: Rng>(self, f: &[u64], rng: &mut R) -> Vec<u64> {
        let f = self.monic(f.to_vec());
        let mut out = Vec::new();
        let mut stack = vec![f];
        while let Some(f) = stack.pop() {
            match f.len() {
                0 | 1 => {}
                2 => out.push(self.neg(f[0])),
                _ => loop {
                    // gcd(f, (x + a)^((p-1)/2) - 1) separates the roots r
                    // with r + a a square from the rest.
                    let a = rng.random_range(0..self.p);
                    let mut acc = vec![1u64];
                    let mut base = self.poly_divmod(&[a, 1], &f).1;
                    let mut e = (self.p - 1) / 2;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = self.poly_mulmod(&acc, &base, &f);
                        }
                        base = self.poly_mulmod(&base, &base, &f);
                        e >>= 1;
                    }
                    if acc.is_empty() {
                        acc.push(0);
                    }
                    acc[0] = self.sub(acc[0], 1);
                    let g = self.poly_gcd(&f, &acc);
                    if g.len() > 1 && g.len() < f.len() {
                        let h = self.monic(self.poly_divmod(&f, &g).0);
                        stack.push(g);
                        stack.push(h);
                        break;
                    }
                },
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roots_of_product() {
        let f = Fp::new(101);
        // (x-3)(x-7)(x-50)
        let mut poly = vec![1u64];
        for r in [3u64, 7, 50] {
            let mut next = vec![0u64; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = f.add(next[i + 1], c);
                next[i] = f.sub(next[i], f.mul(c, r));
            }
            poly = next;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(f.split_roots(&poly, &mut rng), vec![3, 7, 50]);
    }

    #[test]
    fn kernel_and_min_poly() {
        let f = Fp::new(13);
        let a = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 5]];
        let mp = f.krylov_min_poly(&a, &[1, 1, 1]);
        // (x-2)(x-5) = x^2 - 7x + 10
        assert_eq!(mp, vec![10, f.neg(7), 1]);
        let shifted: Vec<Vec<u64>> = a
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, &x)| if i == j { f.sub(x, 2) } else { x }).collect())
            .collect();
        assert_eq!(f.kernel(&shifted).len(), 2);
        let z = f.primitive_root_of_unity(4);
        assert_eq!(f.pow(z, 2), 12);
    }
}

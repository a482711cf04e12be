//! Dixon–Schneider: simultaneous eigenvectors of the class-sum matrices over
//! a prime field, followed by a discrete Fourier lift to root-of-unity
//! multiplicities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modp::Fp;
use super::{ChartabError, ClassData};
use crate::arith;
use crate::group::FiniteGroup;

/// Eigenvalue multiplicities of `ρ(g_c)` per class, as `(exponent of ζ_e, count)`.
pub(crate) type Multiplicities = Vec<Vec<(u32, u32)>>;

pub(crate) struct RawCharacter {
    pub degree: u32,
    pub mults: Multiplicities,
}

const PRIMES_TO_TRY: usize = 6;
const SPLIT_ATTEMPTS: usize = 12;

pub(crate) fn compute(
    g: &FiniteGroup,
    cd: &ClassData,
    seed: u64,
) -> Result<Vec<RawCharacter>, ChartabError> {
    let n = g.order() as u64;
    let e = g.exponent() as u64;
    let max_class = cd.sizes.iter().copied().max().unwrap_or(1) as u64;
    let root = (n as f64).sqrt().ceil() as u64;
    let bound = n.max(2 * root * max_class);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidate = bound / e * e + 1;
    let mut tried = 0;
    let mut last_err = ChartabError::PrimeSearchFailed;
    while candidate < 1 << 31 && tried < PRIMES_TO_TRY {
        if candidate > bound && arith::is_prime(candidate) {
            tried += 1;
            match attempt(g, cd, Fp::new(candidate), &mut rng) {
                Ok(rows) => return Ok(rows),
                Err(Attempt::BadPrime) => {}
                Err(Attempt::Fatal(err)) => last_err = err,
            }
        }
        candidate += e;
    }
    Err(last_err)
}

enum Attempt {
    BadPrime,
    Fatal(ChartabError),
}

// (Σ_j c_j M_j)_{ik} = Σ_{x ∈ C_i} c[class(x^-1 g_k)], restricted to `rows`.
fn combination_rows(g: &FiniteGroup, cd: &ClassData, f: Fp, c: &[u64], rows: &[usize]) -> Vec<Vec<u64>> {
    let r = cd.len();
    rows.iter()
        .map(|&i| {
            let mut out = vec![0u64; r];
            for &x in &cd.classes[i] {
                let xi = g.inv(x);
                for (k, o) in out.iter_mut().enumerate() {
                    *o += c[cd.class_of[g.mul(xi, cd.reps[k])]];
                }
            }
            out.iter_mut().for_each(|o| *o %= f.p);
            out
        })
        .collect()
}

fn attempt(g: &FiniteGroup, cd: &ClassData, f: Fp, rng: &mut ChaCha8Rng) -> Result<Vec<RawCharacter>, Attempt> {
    let r = cd.len();
    let identity: Vec<Vec<u64>> = (0..r)
        .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut work = vec![identity];
    let mut done: Vec<Vec<u64>> = Vec::new();
    while let Some(space) = work.pop() {
        if space.len() == 1 {
            done.push(space.into_iter().next().unwrap());
            continue;
        }
        let parts = split_space(g, cd, f, &space, rng).ok_or(Attempt::BadPrime)?;
        work.extend(parts);
    }
    let n = g.order() as u64;
    let e = g.exponent() as u64;
    let zeta = f.primitive_root_of_unity(e);
    let mut rows = Vec::with_capacity(r);
    for mut v in done {
        if v[0] == 0 {
            return Err(Attempt::BadPrime);
        }
        let iv = f.inv(v[0]);
        v.iter_mut().for_each(|x| *x = f.mul(*x, iv));
        // Σ_k ω_k ω_{k̄} / |C_k| = |G| / χ(1)^2
        let s = (0..r).fold(0, |acc, k| {
            let t = f.mul(f.mul(v[k], v[cd.inverse_class[k]]), f.inv(cd.sizes[k] as u64 % f.p));
            f.add(acc, t)
        });
        if s == 0 {
            return Err(Attempt::BadPrime);
        }
        let d2 = f.mul(n % f.p, f.inv(s));
        let d = (d2 as f64).sqrt().round() as u64;
        if d == 0 || d * d != d2 || n % d != 0 {
            return Err(Attempt::BadPrime);
        }
        let chi: Vec<u64> = (0..r)
            .map(|k| f.mul(f.mul(v[k], d), f.inv(cd.sizes[k] as u64 % f.p)))
            .collect();
        let mut mults = Vec::with_capacity(r);
        for k in 0..r {
            mults.push(lift_class(g, cd, f, zeta, e, &chi, k, d).map_err(Attempt::Fatal)?);
        }
        rows.push(RawCharacter { degree: d as u32, mults });
    }
    let total: u64 = rows.iter().map(|c| (c.degree as u64).pow(2)).sum();
    if total != n {
        return Err(Attempt::BadPrime);
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn lift_class(
    g: &FiniteGroup,
    cd: &ClassData,
    f: Fp,
    zeta: u64,
    e: u64,
    chi: &[u64],
    k: usize,
    d: u64,
) -> Result<Vec<(u32, u32)>, ChartabError> {
    let o = g.elem_order(cd.reps[k]) as u64;
    let step = e / o;
    let zo = f.pow(zeta, step);
    let zo_inv = f.inv(zo);
    let inv_o = f.inv(o % f.p);
    let vals: Vec<u64> = (0..o).map(|s| chi[cd.power[s as usize][k]]).collect();
    let mut out = Vec::new();
    let mut sum = 0u64;
    for j in 0..o {
        let w = f.pow(zo_inv, j);
        let mut acc = 0u64;
        let mut t = 1u64;
        for &x in &vals {
            acc = f.add(acc, f.mul(x, t));
            t = f.mul(t, w);
        }
        let m = f.mul(acc, inv_o);
        if m > d {
            return Err(ChartabError::LiftInconsistent(format!(
                "class {k}: multiplicity residue {m} exceeds degree {d}"
            )));
        }
        if m > 0 {
            out.push(((j * step) as u32, m as u32));
            sum += m;
        }
    }
    if sum != d {
        return Err(ChartabError::LiftInconsistent(format!(
            "class {k}: multiplicities sum to {sum}, degree {d}"
        )));
    }
    Ok(out)
}

/// Splits an invariant subspace (rows in reduced echelon form) into common
/// eigenspaces of a random class-matrix combination. `None` when no attempt
/// separates it, which signals an unsuitable prime.
fn split_space(
    g: &FiniteGroup,
    cd: &ClassData,
    f: Fp,
    space: &[Vec<u64>],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<Vec<u64>>>> {
    let r = cd.len();
    let m = space.len();
    let pivots: Vec<usize> = space
        .iter()
        .map(|b| b.iter().position(|&x| x != 0).unwrap())
        .collect();
    for _ in 0..SPLIT_ATTEMPTS {
        let c: Vec<u64> = (0..r).map(|_| rng.random_range(0..f.p)).collect();
        let mrows = combination_rows(g, cd, f, &c, &pivots);
        // a[i][j] = coordinate i of M b_j
        let a: Vec<Vec<u64>> = mrows
            .iter()
            .map(|row| space.iter().map(|b| dot(f, row, b)).collect())
            .collect();
        let v: Vec<u64> = (0..m).map(|_| rng.random_range(0..f.p)).collect();
        let mp = f.krylov_min_poly(&a, &v);
        if mp.len() <= 2 {
            continue;
        }
        let roots = f.split_roots(&mp, rng);
        let mut parts = Vec::new();
        let mut dim = 0;
        for lam in roots {
            let shifted: Vec<Vec<u64>> = a
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, &x)| if i == j { f.sub(x, lam) } else { x })
                        .collect()
                })
                .collect();
            let ker = f.kernel(&shifted);
            dim += ker.len();
            let mut vecs: Vec<Vec<u64>> = ker
                .iter()
                .map(|y| {
                    let mut x = vec![0u64; r];
                    for (yi, b) in y.iter().zip(space) {
                        if *yi != 0 {
                            for (xx, &bb) in x.iter_mut().zip(b) {
                                *xx = f.add(*xx, f.mul(*yi, bb));
                            }
                        }
                    }
                    x
                })
                .collect();
            f.rref(&mut vecs);
            parts.push(vecs);
        }
        if dim == m && parts.len() > 1 {
            return Some(parts);
        }
    }
    None
}

fn dot(f: Fp, a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |s, (&x, &y)| (s + x * y) % f.p)
}

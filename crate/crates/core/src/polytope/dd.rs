//! Double description method for the extreme rays of a pointed cone
//! `{y : A y ≥ 0}` given by integer rows.
//!
//! Rows are inserted in input order after an initial simplicial basis.
//! Adjacency of rays is decided combinatorially from their zero sets, which
//! stays exact on the highly degenerate inputs the generators produce.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactlinalg::{int_dot, int_rank, inverse, make_primitive, QMatrix, QVector, Rational};

pub(crate) struct DdOutput {
    pub rays: Vec<Vec<BigInt>>,
    /// Sorted indices of the rows each ray satisfies with equality.
    pub zeros: Vec<Vec<u32>>,
}

/// The constraint rows have rank below the dimension, so the cone contains a line.
#[derive(Debug)]
pub(crate) struct NotPointed;

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn insert_sorted(v: &mut Vec<u32>, x: u32) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn choose_basis(rows: &[Vec<BigInt>], dim: usize) -> Vec<usize> {
    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        if basis.len() == dim {
            break;
        }
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&b| rows[b].clone()).collect();
        trial.push(row.clone());
        if int_rank(trial, dim) == basis.len() + 1 {
            basis.push(i);
        }
    }
    basis
}

pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Result<DdOutput, NotPointed> {
    let basis = choose_basis(rows, dim);
    if basis.len() < dim {
        return Err(NotPointed);
    }
    let bmat = QMatrix::new(
        basis
            .iter()
            .map(|&b| QVector::new(rows[b].iter().cloned().map(Rational::from_integer).collect()))
            .collect(),
    )
    .expect("rectangular basis");
    let inv = inverse(&bmat).expect("basis rows are independent");

    let mut rays: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    let mut zeros: Vec<Vec<u32>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let col = QVector::new(inv.rows().iter().map(|r| r[i].clone()).collect());
        let (_, mut ints) = col.scaled_to_integers();
        make_primitive(&mut ints);
        rays.push(ints);
        let mut z: Vec<u32> = basis
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &b)| b as u32)
            .collect();
        z.sort_unstable();
        zeros.push(z);
    }

    let in_basis = {
        let mut flags = vec![false; rows.len()];
        for &b in &basis {
            flags[b] = true;
        }
        flags
    };
    let mut index: Vec<Vec<u32>> = vec![Vec::new(); rows.len()];
    let mut needed = vec![false; rows.len()];
    let mut counts: Vec<u32> = Vec::new();
    let min_common = dim.saturating_sub(2);

    for (h, row) in rows.iter().enumerate() {
        if in_basis[h] {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| int_dot(row, r)).collect();
        if !values.iter().any(Signed::is_negative) {
            for (z, v) in zeros.iter_mut().zip(&values) {
                if v.is_zero() {
                    insert_sorted(z, h as u32);
                }
            }
            continue;
        }

        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        let is_pos: Vec<bool> = values.iter().map(Signed::is_positive).collect();

        // Inverted index restricted to rows that occur in some negative ray.
        let mut touched: Vec<u32> = Vec::new();
        for &n in &neg {
            for &z in &zeros[n] {
                if !needed[z as usize] {
                    needed[z as usize] = true;
                    touched.push(z);
                }
            }
        }
        for (ri, z) in zeros.iter().enumerate() {
            for &x in z {
                if needed[x as usize] {
                    index[x as usize].push(ri as u32);
                }
            }
        }

        counts.clear();
        counts.resize(rays.len(), 0);
        let mut new_rays: Vec<Vec<BigInt>> = Vec::new();
        let mut new_zeros: Vec<Vec<u32>> = Vec::new();
        for &n in &neg {
            let mut cand: Vec<usize> = Vec::new();
            if min_common == 0 {
                cand.extend((0..rays.len()).filter(|&i| is_pos[i]));
            } else {
                for &z in &zeros[n] {
                    for &ri in &index[z as usize] {
                        let ri = ri as usize;
                        if is_pos[ri] {
                            if counts[ri] == 0 {
                                cand.push(ri);
                            }
                            counts[ri] += 1;
                        }
                    }
                }
            }
            for &p in &cand {
                let enough = min_common == 0 || counts[p] as usize >= min_common;
                counts[p] = 0;
                if !enough {
                    continue;
                }
                let common = intersect(&zeros[n], &zeros[p]);
                let adjacent = if common.is_empty() {
                    rays.len() == 2
                } else {
                    let pivot = *common
                        .iter()
                        .min_by_key(|&&z| index[z as usize].len())
                        .unwrap();
                    !index[pivot as usize].iter().any(|&r| {
                        let r = r as usize;
                        r != p && r != n && is_subset(&common, &zeros[r])
                    })
                };
                if !adjacent {
                    continue;
                }
                let sp = &values[p];
                let sn = &values[n];
                let mut ray: Vec<BigInt> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(yn, yp)| sp * yn - sn * yp)
                    .collect();
                make_primitive(&mut ray);
                let mut z = common;
                insert_sorted(&mut z, h as u32);
                new_rays.push(ray);
                new_zeros.push(z);
            }
        }

        for &z in &touched {
            needed[z as usize] = false;
            index[z as usize].clear();
        }

        let mut kept_rays = Vec::with_capacity(rays.len() + new_rays.len());
        let mut kept_zeros = Vec::with_capacity(rays.len() + new_rays.len());
        for ((ray, mut z), v) in rays.into_iter().zip(zeros).zip(&values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                insert_sorted(&mut z, h as u32);
            }
            kept_rays.push(ray);
            kept_zeros.push(z);
        }
        kept_rays.extend(new_rays);
        kept_zeros.extend(new_zeros);
        rays = kept_rays;
        zeros = kept_zeros;
    }

    Ok(DdOutput { rays, zeros })
}

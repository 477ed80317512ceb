//! Concrete multiplication rules used to close generator sets into
//! [`FiniteGroup`](super::FiniteGroup)s.
//!
//! Every element is carried as a `Vec<u32>`: permutation images, matrix
//! entries, or residue coordinates depending on the law.

use crate::error::{Error, Result};

pub trait ElementLaw: Send + Sync {
    fn identity(&self) -> Vec<u32>;
    fn mul(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>>;
    fn inv(&self, a: &[u32]) -> Result<Vec<u32>>;
    fn render(&self, a: &[u32]) -> String;
}

/// Permutations of `{0, .., degree-1}` stored as image vectors. Products
/// compose left to right: `(a * b)(i) = b(a(i))`.
#[derive(Debug, Clone)]
pub struct PermLaw {
    pub degree: usize,
}

impl PermLaw {
    pub fn new(degree: usize) -> Self {
        PermLaw { degree }
    }

    fn check(&self, a: &[u32]) -> Result<()> {
        if a.len() != self.degree {
            return Err(Error::InvalidElement(format!(
                "permutation of length {} under degree {}",
                a.len(),
                self.degree
            )));
        }
        let mut seen = vec![false; self.degree];
        for &x in a {
            let x = x as usize;
            if x >= self.degree || seen[x] {
                return Err(Error::InvalidElement(format!("{a:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(())
    }

    /// Builds the image vector of a product of cycles given with 1-based points.
    pub fn from_cycles(&self, cycles: &[Vec<usize>]) -> Result<Vec<u32>> {
        let mut img: Vec<u32> = (0..self.degree as u32).collect();
        // Each cycle is applied after the previous ones (left to right).
        for cyc in cycles {
            let mut step: Vec<u32> = (0..self.degree as u32).collect();
            for (i, &pt) in cyc.iter().enumerate() {
                let next = cyc[(i + 1) % cyc.len()];
                if pt == 0 || pt > self.degree || next == 0 || next > self.degree {
                    return Err(Error::InvalidElement(format!(
                        "cycle point out of range 1..={}",
                        self.degree
                    )));
                }
                step[pt - 1] = (next - 1) as u32;
            }
            img = img.iter().map(|&x| step[x as usize]).collect();
        }
        self.check(&img)?;
        Ok(img)
    }
}

impl ElementLaw for PermLaw {
    fn identity(&self) -> Vec<u32> {
        (0..self.degree as u32).collect()
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.iter().map(|&x| b[x as usize]).collect())
    }

    fn inv(&self, a: &[u32]) -> Result<Vec<u32>> {
        self.check(a)?;
        let mut out = vec![0; a.len()];
        for (i, &x) in a.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Ok(out)
    }

    fn render(&self, a: &[u32]) -> String {
        let mut seen = vec![false; a.len()];
        let mut s = String::new();
        for start in 0..a.len() {
            if seen[start] || a[start] as usize == start {
                continue;
            }
            let mut cyc = vec![start + 1];
            seen[start] = true;
            let mut cur = a[start] as usize;
            while cur != start {
                seen[cur] = true;
                cyc.push(cur + 1);
                cur = a[cur] as usize;
            }
            let body: Vec<String> = cyc.iter().map(|x| x.to_string()).collect();
            s.push('(');
            s.push_str(&body.join(","));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

/// Square matrices over the `p`-element field, row-major.
#[derive(Debug, Clone)]
pub struct MatFpLaw {
    pub p: u32,
    pub dim: usize,
}

impl MatFpLaw {
    pub fn new(p: u32, dim: usize) -> Self {
        MatFpLaw { p, dim }
    }

    fn check(&self, a: &[u32]) -> Result<()> {
        if a.len() != self.dim * self.dim || a.iter().any(|&x| x >= self.p) {
            return Err(Error::InvalidElement(format!(
                "{a:?} is not a {d}x{d} matrix over F_{p}",
                d = self.dim,
                p = self.p
            )));
        }
        Ok(())
    }
}

impl ElementLaw for MatFpLaw {
    fn identity(&self) -> Vec<u32> {
        let mut m = vec![0; self.dim * self.dim];
        for i in 0..self.dim {
            m[i * self.dim + i] = 1;
        }
        m
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        self.check(a)?;
        self.check(b)?;
        let (d, p) = (self.dim, self.p as u64);
        let mut out = vec![0u32; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u64;
                for l in 0..d {
                    acc += a[i * d + l] as u64 * b[l * d + j] as u64;
                }
                out[i * d + j] = (acc % p) as u32;
            }
        }
        Ok(out)
    }

    fn inv(&self, a: &[u32]) -> Result<Vec<u32>> {
        self.check(a)?;
        let d = self.dim;
        let p = self.p as u64;
        let mut m: Vec<Vec<u64>> = (0..d)
            .map(|i| {
                let mut row: Vec<u64> = a[i * d..(i + 1) * d].iter().map(|&x| x as u64).collect();
                row.extend((0..d).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| m[r][col] != 0)
                .ok_or_else(|| Error::InvalidElement("singular matrix".into()))?;
            m.swap(col, piv);
            let inv = crate::linalg::inv_mod(m[col][col], p);
            for x in m[col].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..d {
                if r != col && m[r][col] != 0 {
                    let f = m[r][col];
                    for c in 0..2 * d {
                        m[r][c] = (m[r][c] + p * p - f * m[col][c] % p) % p;
                    }
                }
            }
        }
        Ok(m.iter().flat_map(|row| row[d..].iter().map(|&x| x as u32)).collect())
    }

    fn render(&self, a: &[u32]) -> String {
        let rows: Vec<String> = a
            .chunks(self.dim)
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

/// An explicit multiplication table on `0..n`; elements are singletons `[i]`.
#[derive(Debug, Clone)]
pub struct TableLaw {
    table: Vec<Vec<u32>>,
    identity: u32,
    inverse: Vec<u32>,
}

impl TableLaw {
    /// Validates the table as a group (closure, identity, inverses,
    /// associativity) before accepting it.
    pub fn new(table: Vec<Vec<u32>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidElement("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x as usize >= n)) {
            return Err(Error::InvalidElement("table is not a closed n x n table".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| Error::InvalidElement("table has no identity".into()))?
            as u32;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidElement(format!("element {x} has no inverse")))?
                as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c] as usize] {
                        return Err(Error::InvalidElement(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(TableLaw { table, identity, inverse })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    fn get(&self, a: &[u32]) -> Result<usize> {
        match a {
            [x] if (*x as usize) < self.table.len() => Ok(*x as usize),
            _ => Err(Error::InvalidElement(format!("{a:?} is not a table element"))),
        }
    }
}

impl ElementLaw for TableLaw {
    fn identity(&self) -> Vec<u32> {
        vec![self.identity]
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        Ok(vec![self.table[self.get(a)?][self.get(b)?]])
    }

    fn inv(&self, a: &[u32]) -> Result<Vec<u32>> {
        Ok(vec![self.inverse[self.get(a)?]])
    }

    fn render(&self, a: &[u32]) -> String {
        format!("t{}", a.first().copied().unwrap_or(0))
    }
}

/// Residues modulo `moduli[i]` under componentwise addition.
#[derive(Debug, Clone)]
pub struct AbelianLaw {
    pub moduli: Vec<u32>,
}

impl ElementLaw for AbelianLaw {
    fn identity(&self) -> Vec<u32> {
        vec![0; self.moduli.len()]
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        if a.len() != self.moduli.len() || b.len() != self.moduli.len() {
            return Err(Error::InvalidElement("coordinate length mismatch".into()));
        }
        Ok(a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect())
    }

    fn inv(&self, a: &[u32]) -> Result<Vec<u32>> {
        Ok(a.iter().zip(&self.moduli).map(|(x, m)| (m - x % m) % m).collect())
    }

    fn render(&self, a: &[u32]) -> String {
        let cells: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        format!("({})", cells.join(","))
    }
}

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::{I128Poly, IntPolynomial, ModPoly};
use crate::error::{Error, Result};
use crate::group::law::ElementLaw;
use crate::group::{Caps, FiniteGroup, Group};

/// A torsion-free nilpotent group in Mal'cev coordinates: `mu` gives the
/// coordinates of a product (variables `v1..vm, w1..wm`) and `eps` those of a
/// power (variables `v1..vm, n`). The basis is ordered centre first.
#[derive(Debug, Clone)]
pub struct MalcevGroup {
    pub name: String,
    pub m: usize,
    pub mu: Vec<IntPolynomial>,
    pub eps: Vec<IntPolynomial>,
    pub n0: u64,
    fast_mu: Option<Vec<I128Poly>>,
}

pub type MalcevElement = Vec<BigInt>;

fn mu_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("v{i}")).chain((1..=m).map(|i| format!("w{i}"))).collect()
}

fn eps_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("v{i}")).chain(std::iter::once("n".to_string())).collect()
}

fn as_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

type PolyMatrix = Vec<Vec<IntPolynomial>>;

fn mat_identity(d: usize, nv: usize) -> PolyMatrix {
    (0..d)
        .map(|i| (0..d).map(|j| IntPolynomial::int(nv, i64::from(i == j))).collect())
        .collect()
}

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix, nv: usize) -> PolyMatrix {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    (0..d).fold(IntPolynomial::zero(nv), |acc, l| &acc + &(&a[i][l] * &b[l][j]))
                })
                .collect()
        })
        .collect()
}

/// Unitriangular 4×4 coordinates in the basis order
/// `E14, E13, E24, E12, E23, E34` (centre first).
const UT4_BASIS: [(usize, usize); 6] = [(0, 3), (0, 2), (1, 3), (0, 1), (1, 2), (2, 3)];

/// `Π E_ij^{x_t}` over [`UT4_BASIS`], with `x_t` the variable `first + t`.
fn ut4_matrix(nv: usize, first: usize) -> PolyMatrix {
    let mut m = mat_identity(4, nv);
    for (t, &(i, j)) in UT4_BASIS.iter().enumerate() {
        let mut e = mat_identity(4, nv);
        e[i][j] = IntPolynomial::var(nv, first + t);
        m = mat_mul(&m, &e, nv);
    }
    m
}

/// Reads coordinates back from a unitriangular matrix.
fn ut4_coords(m: &PolyMatrix) -> Vec<IntPolynomial> {
    vec![
        &m[0][3] - &(&m[0][2] * &m[2][3]),
        &m[0][2] - &(&m[0][1] * &m[1][2]),
        &m[1][3] - &(&m[1][2] * &m[2][3]),
        m[0][1].clone(),
        m[1][2].clone(),
        m[2][3].clone(),
    ]
}

impl MalcevGroup {
    /// Builds a group from polynomials, running the axiom checks.
    pub fn new(name: &str, m: usize, mu: Vec<IntPolynomial>, eps: Vec<IntPolynomial>) -> Result<Self> {
        if mu.len() != m || eps.len() != m {
            return Err(Error::InvalidElement(format!("expected {m} mu and eps polynomials")));
        }
        if mu.iter().any(|p| p.nvars() != 2 * m) || eps.iter().any(|p| p.nvars() != m + 1) {
            return Err(Error::InvalidElement("wrong variable count".into()));
        }
        let n0 = mu
            .iter()
            .chain(&eps)
            .fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()))
            .to_u64()
            .ok_or_else(|| Error::InvalidElement("n0 overflows".into()))?;
        let fast_mu = mu.iter().map(IntPolynomial::compile_i128).collect();
        let g = MalcevGroup { name: name.to_string(), m, mu, eps, n0, fast_mu };
        g.check_symbolic_axioms()?;
        Ok(g)
    }

    pub fn zn(m: usize) -> Self {
        let nv = 2 * m;
        let mu = (0..m)
            .map(|i| &IntPolynomial::var(nv, i) + &IntPolynomial::var(nv, m + i))
            .collect();
        let eps = (0..m)
            .map(|i| &IntPolynomial::var(m + 1, i) * &IntPolynomial::var(m + 1, m))
            .collect();
        MalcevGroup::new(&format!("zn({m})"), m, mu, eps).expect("Z^m is a group")
    }

    pub fn heisenberg() -> Self {
        let mn = mu_names(3);
        let en = eps_names(3);
        let (mn, en) = (as_refs(&mn), as_refs(&en));
        let p = |s: &str, names: &[&str]| IntPolynomial::parse(s, names).expect("built-in polynomial");
        let mu = vec![p("v1 + w1 + v3*w2", &mn), p("v2 + w2", &mn), p("v3 + w3", &mn)];
        let eps = vec![p("n*v1 + v2*v3*n*(n-1)/2", &en), p("n*v2", &en), p("n*v3", &en)];
        MalcevGroup::new("heisenberg", 3, mu, eps).expect("Heisenberg group is a group")
    }

    /// Upper unitriangular 4×4 integer matrices; polynomials derived from the
    /// matrix product and the binomial expansion of `(I + X)^n`.
    pub fn ut4() -> Self {
        let m = 6;
        let nv = 2 * m;
        let prod = mat_mul(&ut4_matrix(nv, 0), &ut4_matrix(nv, m), nv);
        let mu = ut4_coords(&prod);

        let ne = m + 1;
        let n = IntPolynomial::var(ne, m);
        let mut x = ut4_matrix(ne, 0);
        for (i, row) in x.iter_mut().enumerate() {
            row[i] = &row[i] - &IntPolynomial::int(ne, 1);
        }
        let x2 = mat_mul(&x, &x, ne);
        let x3 = mat_mul(&x2, &x, ne);
        let one = IntPolynomial::int(ne, 1);
        let two = IntPolynomial::int(ne, 2);
        let c2 = (&n * &(&n - &one)).scale(&BigRational::new(1.into(), 2.into()));
        let c3 = (&c2 * &(&n - &two)).scale(&BigRational::new(1.into(), 3.into()));
        let power: PolyMatrix = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let base = IntPolynomial::int(ne, i64::from(i == j));
                        &(&(&base + &(&n * &x[i][j])) + &(&c2 * &x2[i][j])) + &(&c3 * &x3[i][j])
                    })
                    .collect()
            })
            .collect();
        let eps = ut4_coords(&power);
        MalcevGroup::new("ut4", m, mu, eps).expect("UT(4, Z) is a group")
    }

    /// `zn(<m>)`, `zn<m>`, `heisenberg` or `ut4`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "heisenberg" | "heis" => Ok(MalcevGroup::heisenberg()),
            "ut4" => Ok(MalcevGroup::ut4()),
            _ => {
                let digits = name
                    .strip_prefix("zn")
                    .map(|s| s.trim_start_matches('(').trim_end_matches(')'))
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&m| m >= 1);
                digits.map(MalcevGroup::zn).ok_or_else(|| Error::UnknownGroup(name.to_string()))
            }
        }
    }

    /// Parses the text format:
    ///
    /// ```text
    /// malcev m=3 n0=auto
    /// mu[1] = v1 + w1 + v3*w2
    /// eps[1] = n*v1 + v2*v3*n*(n-1)/2
    /// ```
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty Mal'cev file"))?;
        let mut words = header.split_whitespace();
        if words.next() != Some("malcev") {
            return Err(Error::parse(hl, "expected `malcev m=<m> n0=auto`"));
        }
        let mut m = None;
        let mut declared_n0 = None;
        let mut name = "custom".to_string();
        for w in words {
            match w.split_once('=') {
                Some(("m", v)) => m = Some(v.parse::<usize>().map_err(|_| Error::parse(hl, "bad m"))?),
                Some(("n0", "auto")) => {}
                Some(("n0", v)) => {
                    declared_n0 = Some(v.parse::<u64>().map_err(|_| Error::parse(hl, "bad n0"))?)
                }
                Some(("name", v)) => name = v.to_string(),
                _ => return Err(Error::parse(hl, format!("unknown header field `{w}`"))),
            }
        }
        let m = m.filter(|&m| m >= 1).ok_or_else(|| Error::parse(hl, "missing m"))?;
        let (mn, en) = (mu_names(m), eps_names(m));
        let mut mu = vec![None; m];
        let mut eps = vec![None; m];
        for (ln, line) in lines {
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| Error::parse(ln, "expected `=`"))?;
            let lhs = lhs.trim();
            let (kind, idx) = lhs
                .strip_suffix(']')
                .and_then(|s| s.split_once('['))
                .ok_or_else(|| Error::parse(ln, format!("bad left side `{lhs}`")))?;
            let i: usize = idx
                .parse()
                .ok()
                .filter(|&i| (1..=m).contains(&i))
                .ok_or_else(|| Error::parse(ln, format!("index {idx} out of range")))?;
            let reparse = |e: Error| match e {
                Error::Parse { msg, .. } => Error::parse(ln, msg),
                other => other,
            };
            match kind {
                "mu" => mu[i - 1] = Some(IntPolynomial::parse(rhs, &as_refs(&mn)).map_err(reparse)?),
                "eps" => eps[i - 1] = Some(IntPolynomial::parse(rhs, &as_refs(&en)).map_err(reparse)?),
                _ => return Err(Error::parse(ln, format!("unknown polynomial `{kind}`"))),
            }
        }
        let mu: Vec<_> = mu
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::parse(hl, format!("mu[{}] missing", i + 1))))
            .collect::<Result<_>>()?;
        let eps: Vec<_> = eps
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::parse(hl, format!("eps[{}] missing", i + 1))))
            .collect::<Result<_>>()?;
        let mut g = MalcevGroup::new(&name, m, mu, eps)?;
        if let Some(d) = declared_n0 {
            if d % g.n0 != 0 {
                return Err(Error::parse(hl, format!("declared n0 = {d} is not a multiple of {}", g.n0)));
            }
            g.n0 = d;
        }
        Ok(g)
    }

    /// Identity, associativity and power laws as polynomial identities, plus
    /// integer-valuedness of every polynomial.
    pub fn check_symbolic_axioms(&self) -> Result<()> {
        let m = self.m;
        let fail = |what: &str| Err(Error::InvalidElement(format!("{}: {what}", self.name)));
        for p in self.mu.iter().chain(&self.eps) {
            if !p.is_integer_valued() {
                return fail("a polynomial is not integer valued");
            }
        }
        // mu(v, 0) = v and mu(0, w) = w.
        let nv = 2 * m;
        let zero = IntPolynomial::zero(m);
        for i in 0..m {
            let vs: Vec<IntPolynomial> = (0..m).map(|j| IntPolynomial::var(m, j)).collect();
            let right: Vec<IntPolynomial> = vs.iter().cloned().chain(std::iter::repeat(zero.clone()).take(m)).collect();
            let left: Vec<IntPolynomial> = std::iter::repeat(zero.clone()).take(m).chain(vs.iter().cloned()).collect();
            if self.mu[i].compose(&right) != vs[i] || self.mu[i].compose(&left) != vs[i] {
                return fail("identity law");
            }
        }
        // Associativity over variables u, v, w (3m in total).
        let tv = 3 * m;
        let var = |j: usize| IntPolynomial::var(tv, j);
        let uv: Vec<IntPolynomial> = self
            .mu
            .iter()
            .map(|p| p.compose(&(0..nv).map(var).collect::<Vec<_>>()))
            .collect();
        let vw: Vec<IntPolynomial> = self
            .mu
            .iter()
            .map(|p| p.compose(&(m..m + nv).map(var).collect::<Vec<_>>()))
            .collect();
        for i in 0..m {
            let lhs_args: Vec<IntPolynomial> = uv.iter().cloned().chain((2 * m..tv).map(var)).collect();
            let rhs_args: Vec<IntPolynomial> = (0..m).map(var).chain(vw.iter().cloned()).collect();
            if self.mu[i].compose(&lhs_args) != self.mu[i].compose(&rhs_args) {
                return fail("associativity");
            }
        }
        // eps(v, 0) = 0, eps(v, 1) = v, eps(v, a + b) = mu(eps(v, a), eps(v, b)).
        let ev = m + 1;
        for i in 0..m {
            let mut args: Vec<IntPolynomial> = (0..m).map(|j| IntPolynomial::var(m, j)).collect();
            args.push(IntPolynomial::zero(m));
            if !self.eps[i].compose(&args).is_zero() {
                return fail("zeroth power");
            }
            *args.last_mut().unwrap() = IntPolynomial::int(m, 1);
            if self.eps[i].compose(&args) != IntPolynomial::var(m, i) {
                return fail("first power");
            }
        }
        let sv = m + 2;
        let v = |j: usize| IntPolynomial::var(sv, j);
        let at = |power: IntPolynomial| -> Vec<IntPolynomial> {
            let args: Vec<IntPolynomial> = (0..m).map(v).chain(std::iter::once(power)).collect();
            self.eps.iter().map(|p| p.compose(&args)).collect()
        };
        let a = at(v(m));
        let b = at(v(m + 1));
        let ab = at(&v(m) + &v(m + 1));
        let prod_args: Vec<IntPolynomial> = a.into_iter().chain(b).collect();
        for i in 0..m {
            if self.mu[i].compose(&prod_args) != ab[i] {
                return fail("power additivity");
            }
        }
        let _ = ev;
        Ok(())
    }

    pub fn identity(&self) -> MalcevElement {
        vec![BigInt::zero(); self.m]
    }

    pub fn mal_mul(&self, v: &[BigInt], w: &[BigInt]) -> Result<MalcevElement> {
        if v.len() != self.m || w.len() != self.m {
            return Err(Error::ArityMismatch { expected: self.m, got: v.len().min(w.len()) });
        }
        let args: Vec<BigInt> = v.iter().chain(w).cloned().collect();
        self.mu.iter().map(|p| p.eval_int(&args)).collect()
    }

    pub fn mal_pow(&self, v: &[BigInt], n: &BigInt) -> Result<MalcevElement> {
        if v.len() != self.m {
            return Err(Error::ArityMismatch { expected: self.m, got: v.len() });
        }
        let args: Vec<BigInt> = v.iter().cloned().chain(std::iter::once(n.clone())).collect();
        self.eps.iter().map(|p| p.eval_int(&args)).collect()
    }

    pub fn mal_inv(&self, v: &[BigInt]) -> Result<MalcevElement> {
        self.mal_pow(v, &BigInt::from(-1))
    }

    /// Machine-integer product; `None` on overflow.
    pub fn mul_i128(&self, v: &[i128], w: &[i128]) -> Option<Vec<i128>> {
        let fast = self.fast_mu.as_ref()?;
        let args: Vec<i128> = v.iter().chain(w).copied().collect();
        fast.iter().map(|p| p.eval(&args)).collect()
    }

    /// `gcd(n, n0) = 1` and `n ≥ 2`.
    pub fn check_modulus(&self, n: u64) -> Result<()> {
        if n < 2 {
            return Err(Error::PreconditionFailed(format!("modulus {n} must be at least 2")));
        }
        if n.gcd(&self.n0) != 1 {
            return Err(Error::NotCoprime { n, n0: self.n0 });
        }
        Ok(())
    }

    /// Lexicographic index of `v mod n` in [`finite_quotient`](Self::finite_quotient).
    pub fn quotient_index(&self, v: &[BigInt], n: u64) -> usize {
        let nb = BigInt::from(n);
        v.iter().fold(0usize, |acc, x| {
            acc * n as usize + x.mod_floor(&nb).to_usize().expect("reduced")
        })
    }

    /// The quotient `G/G^{(n)}` on coordinate vectors mod `n`, indexed
    /// lexicographically (first coordinate most significant).
    pub fn finite_quotient(&self, n: u64, caps: &Caps) -> Result<FiniteGroup> {
        self.check_modulus(n)?;
        let order = n
            .checked_pow(self.m as u32)
            .filter(|&o| o <= caps.order as u64)
            .ok_or_else(|| Error::cap("finite quotient order", caps.order as u64))?;
        let law = ModLaw::new(self, n)?;
        let m = self.m;
        let elems: Vec<Vec<u32>> = (0..order)
            .map(|mut idx| {
                let mut v = vec![0u32; m];
                for slot in v.iter_mut().rev() {
                    *slot = (idx % n) as u32;
                    idx /= n;
                }
                v
            })
            .collect();
        let gens: Vec<Vec<u32>> = (0..m)
            .map(|i| (0..m).map(|j| u32::from(i == j)).collect())
            .collect();
        FiniteGroup::from_elements(&elems, &gens, Arc::new(law), caps)
    }

    /// Unit vectors `e_i` whose coordinate simply adds (`mu_i = v_i + w_i`):
    /// the generators used by the default random walk.
    pub fn top_generators(&self) -> Vec<MalcevElement> {
        let m = self.m;
        (0..m)
            .filter(|&i| self.mu[i] == &IntPolynomial::var(2 * m, i) + &IntPolynomial::var(2 * m, m + i))
            .map(|i| (0..m).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect()
    }

    /// Machine-integer arithmetic, when every polynomial compiles to `i128`.
    pub fn fast(&self) -> Option<FastMalcev> {
        let m = self.m;
        let mu = self.fast_mu.clone()?;
        let mut args: Vec<IntPolynomial> = (0..m).map(|j| IntPolynomial::var(m, j)).collect();
        args.push(IntPolynomial::int(m, -1));
        let inv = self.eps.iter().map(|p| p.compose(&args).compile_i128()).collect::<Option<_>>()?;
        Some(FastMalcev { m, mu, inv })
    }
}

/// [`MalcevGroup`] arithmetic on `i128` coordinates. Operations panic on
/// overflow, which desk-scale walks never reach.
#[derive(Debug, Clone)]
pub struct FastMalcev {
    m: usize,
    mu: Vec<I128Poly>,
    inv: Vec<I128Poly>,
}

impl FastMalcev {
    pub fn to_big(v: &[i128]) -> MalcevElement {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }
}

impl Group for FastMalcev {
    type Elem = Vec<i128>;

    fn identity(&self) -> Vec<i128> {
        vec![0; self.m]
    }

    fn mul(&self, a: &Vec<i128>, b: &Vec<i128>) -> Vec<i128> {
        let args: Vec<i128> = a.iter().chain(b).copied().collect();
        self.mu.iter().map(|p| p.eval(&args).expect("coordinate overflow")).collect()
    }

    fn inv(&self, a: &Vec<i128>) -> Vec<i128> {
        self.inv.iter().map(|p| p.eval(a).expect("coordinate overflow")).collect()
    }
}

impl Group for MalcevGroup {
    type Elem = MalcevElement;

    fn identity(&self) -> MalcevElement {
        MalcevGroup::identity(self)
    }

    fn mul(&self, a: &MalcevElement, b: &MalcevElement) -> MalcevElement {
        self.mal_mul(a, b).expect("polynomials are certified integer valued")
    }

    fn inv(&self, a: &MalcevElement) -> MalcevElement {
        self.mal_inv(a).expect("polynomials are certified integer valued")
    }
}

/// Coordinate arithmetic mod `n`.
pub(crate) struct ModLaw {
    n: u64,
    m: usize,
    mu: Vec<ModPoly>,
    inv: Vec<ModPoly>,
}

impl ModLaw {
    pub(crate) fn new(g: &MalcevGroup, n: u64) -> Result<Self> {
        let m = g.m;
        let mu = g.mu.iter().map(|p| p.compile_mod(n)).collect::<Result<_>>()?;
        let mut args: Vec<IntPolynomial> = (0..m).map(|j| IntPolynomial::var(m, j)).collect();
        args.push(IntPolynomial::int(m, -1));
        let inv = g.eps.iter().map(|p| p.compose(&args).compile_mod(n)).collect::<Result<_>>()?;
        Ok(ModLaw { n, m, mu, inv })
    }
}

impl ElementLaw for ModLaw {
    fn identity(&self) -> Vec<u32> {
        vec![0; self.m]
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        if a.len() != self.m || b.len() != self.m {
            return Err(Error::InvalidElement("coordinate length mismatch".into()));
        }
        let args: Vec<u64> = a.iter().chain(b).map(|&x| x as u64 % self.n).collect();
        Ok(self.mu.iter().map(|p| p.eval(&args) as u32).collect())
    }

    fn inv(&self, a: &[u32]) -> Result<Vec<u32>> {
        let args: Vec<u64> = a.iter().map(|&x| x as u64 % self.n).collect();
        Ok(self.inv.iter().map(|p| p.eval(&args) as u32).collect())
    }

    fn render(&self, a: &[u32]) -> String {
        let cells: Vec<String> = a.iter().map(u32::to_string).collect();
        format!("({})", cells.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> MalcevElement {
        xs.iter().map(|&x| x.into()).collect()
    }

    /// 3×3 unitriangular matrix of `e1^a e2^b e3^c` with e1 = z, e2 = y, e3 = x,
    /// where x = E12, y = E23, z = E13: entries (m12, m13, m23).
    fn heis_matrix(c: &[i64]) -> (i64, i64, i64) {
        // z^a y^b x^c: z^a = I + aE13, y^b = I + bE23, x^c = I + cE12.
        // (I + aE13)(I + bE23)(I + cE12) = I + cE12 + aE13 + bE23.
        (c[2], c[0], c[1])
    }

    fn heis_mul_oracle(x: &[i64], y: &[i64]) -> Vec<i64> {
        let (a12, a13, a23) = heis_matrix(x);
        let (b12, b13, b23) = heis_matrix(y);
        let (m12, m13, m23) = (a12 + b12, a13 + b13 + a12 * b23, a23 + b23);
        // Back to coordinates: m = z^{v1} y^{v2} x^{v3} gives m12 = v3, m23 = v2, m13 = v1.
        vec![m13, m23, m12]
    }

    #[test]
    fn heisenberg_values() {
        let h = MalcevGroup::heisenberg();
        assert_eq!(h.n0, 2);
        assert_eq!(h.mal_mul(&v(&[0, 0, 1]), &v(&[0, 1, 0])).unwrap(), v(&[1, 1, 1]));
        assert_eq!(h.mal_pow(&v(&[0, 1, 1]), &2.into()).unwrap(), v(&[1, 2, 2]));
        assert_eq!(h.mal_pow(&v(&[4, 5, 6]), &0.into()).unwrap(), v(&[0, 0, 0]));
        let c = h.commutator(&v(&[0, 0, 1]), &v(&[0, 1, 0]));
        assert_eq!(c, v(&[1, 0, 0]));
    }

    #[test]
    fn heisenberg_matches_matrix_oracle() {
        let h = MalcevGroup::heisenberg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let x: Vec<i64> = (0..3).map(|_| rng.gen_range(-50..50)).collect();
            let y: Vec<i64> = (0..3).map(|_| rng.gen_range(-50..50)).collect();
            assert_eq!(h.mal_mul(&v(&x), &v(&y)).unwrap(), v(&heis_mul_oracle(&x, &y)));
        }
    }

    #[test]
    fn zn_adds() {
        let z = MalcevGroup::zn(2);
        assert_eq!(z.mal_mul(&v(&[1, 2]), &v(&[3, 4])).unwrap(), v(&[4, 6]));
        assert_eq!(z.n0, 1);
    }

    #[test]
    fn ut4_against_matrices() {
        let g = MalcevGroup::ut4();
        assert_eq!(g.m, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let to_mat = |c: &[i64]| -> [[i64; 4]; 4] {
            let mut m = [[0i64; 4]; 4];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 1;
            }
            for (t, &(i, j)) in UT4_BASIS.iter().enumerate() {
                let mut e = [[0i64; 4]; 4];
                for (a, row) in e.iter_mut().enumerate() {
                    row[a] = 1;
                }
                e[i][j] = c[t];
                let mut out = [[0i64; 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        out[a][b] = (0..4).map(|l| m[a][l] * e[l][b]).sum();
                    }
                }
                m = out;
            }
            m
        };
        for _ in 0..500 {
            let x: Vec<i64> = (0..6).map(|_| rng.gen_range(-9..9)).collect();
            let y: Vec<i64> = (0..6).map(|_| rng.gen_range(-9..9)).collect();
            let (mx, my) = (to_mat(&x), to_mat(&y));
            let mut prod = [[0i64; 4]; 4];
            for a in 0..4 {
                for b in 0..4 {
                    prod[a][b] = (0..4).map(|l| mx[a][l] * my[l][b]).sum();
                }
            }
            let xy = g.mal_mul(&v(&x), &v(&y)).unwrap();
            let xy: Vec<i64> = xy.iter().map(|c| c.to_i64().unwrap()).collect();
            assert_eq!(to_mat(&xy), prod);
            let cube = g.mal_pow(&v(&x), &3.into()).unwrap();
            let direct = g.mal_mul(&g.mal_mul(&v(&x), &v(&x)).unwrap(), &v(&x)).unwrap();
            assert_eq!(cube, direct);
        }
    }

    #[test]
    fn quotients() {
        let h = MalcevGroup::heisenberg();
        let caps = Caps::default();
        let q3 = h.finite_quotient(3, &caps).unwrap();
        assert_eq!(q3.order(), 27);
        assert_eq!(q3.central_series().class, Some(2));
        assert_eq!((0..27).map(|x| q3.element_order(x)).max(), Some(3));
        assert!(matches!(h.finite_quotient(2, &caps), Err(Error::NotCoprime { n: 2, n0: 2 })));
        assert_eq!(MalcevGroup::zn(1).finite_quotient(5, &caps).unwrap().order(), 5);
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let h = MalcevGroup::heisenberg();
        let q = h.finite_quotient(5, &Caps::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x = v(&(0..3).map(|_| rng.gen_range(-100..100)).collect::<Vec<_>>());
            let y = v(&(0..3).map(|_| rng.gen_range(-100..100)).collect::<Vec<_>>());
            let xy = h.mal_mul(&x, &y).unwrap();
            assert_eq!(
                h.quotient_index(&xy, 5),
                q.mul(h.quotient_index(&x, 5), h.quotient_index(&y, 5))
            );
        }
    }

    #[test]
    fn file_format() {
        let text = "malcev m=3 n0=auto name=h\n\
                    mu[1] = v1 + w1 + v3*w2\nmu[2] = v2 + w2\nmu[3] = v3 + w3\n\
                    eps[1] = n*v1 + v2*v3*n*(n-1)/2\neps[2] = n*v2\neps[3] = n*v3\n";
        let g = MalcevGroup::from_text(text).unwrap();
        assert_eq!(g.n0, 2);
        assert_eq!(g.name, "h");
        // A non-associative rule is rejected at load.
        let bad = text.replace("v1 + w1 + v3*w2", "v1 + w1 + v3*w2*w2");
        assert!(MalcevGroup::from_text(&bad).is_err());
        let missing = text.replace("eps[3] = n*v3\n", "");
        assert!(matches!(MalcevGroup::from_text(&missing), Err(Error::Parse { .. })));
        let typo = text.replace("mu[2] = v2 + w2", "mu[2] = v2 + q2");
        assert!(matches!(MalcevGroup::from_text(&typo), Err(Error::Parse { line: 3, .. })));
    }
}

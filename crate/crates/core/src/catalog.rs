//! Named group families and a small expression language for them.
//!
//! Orders are used as parameters where a family is usually indexed by order:
//! `dihedral(8)` is the dihedral group of order 8, `generalized_quaternion(8)`
//! is `Q8`. Expressions combine families with `*` (direct product) and `^k`
//! (direct power), e.g. `cyclic(2)^2*dihedral(6)`.

use crate::error::{Error, Result};
use crate::group::{group_from_permutations, FiniteGroup, GroupAutomorphism, DEFAULT_CLOSURE_BOUND};

/// Argument of a catalog constructor.
#[derive(Clone, Debug)]
pub enum CatalogArg {
    Int(usize),
    Group(FiniteGroup),
}

pub const CATALOG_NAMES: &[&str] = &[
    "cyclic",
    "dihedral",
    "generalized_quaternion",
    "elementary_abelian",
    "heisenberg_mod_p",
    "extraspecial_plus",
    "extraspecial_minus",
    "direct_product",
    "semidirect_product",
    "symmetric",
    "alternating",
];

fn canonical_name(name: &str) -> &str {
    match name {
        "heisenberg" => "heisenberg_mod_p",
        "quaternion" => "generalized_quaternion",
        "semidirect" => "semidirect_product",
        other => other,
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParameters(msg.into())
}

fn ints(name: &str, args: &[CatalogArg], count: usize) -> Result<Vec<usize>> {
    if args.len() != count {
        return Err(bad(format!("{name} takes {count} integer argument(s)")));
    }
    args.iter()
        .map(|a| match a {
            CatalogArg::Int(v) => Ok(*v),
            CatalogArg::Group(_) => Err(bad(format!("{name} expects integers"))),
        })
        .collect()
}

/// Builds a catalog group by name.
pub fn catalog(name: &str, args: &[CatalogArg]) -> Result<FiniteGroup> {
    let name = canonical_name(name);
    match name {
        "cyclic" => cyclic(ints(name, args, 1)?[0]),
        "dihedral" => dihedral(ints(name, args, 1)?[0]),
        "generalized_quaternion" => generalized_quaternion(ints(name, args, 1)?[0]),
        "elementary_abelian" => {
            let v = ints(name, args, 2)?;
            elementary_abelian(v[0], v[1])
        }
        "heisenberg_mod_p" => heisenberg_mod_p(ints(name, args, 1)?[0]),
        "extraspecial_plus" => extraspecial_plus(ints(name, args, 1)?[0]),
        "extraspecial_minus" => extraspecial_minus(ints(name, args, 1)?[0]),
        "symmetric" => symmetric(ints(name, args, 1)?[0]),
        "alternating" => alternating(ints(name, args, 1)?[0]),
        "semidirect_product" => {
            let v = ints(name, args, 3)?;
            cyclic_semidirect(v[0], v[1], v[2])
        }
        "direct_product" => {
            let groups: Vec<&FiniteGroup> = args
                .iter()
                .map(|a| match a {
                    CatalogArg::Group(g) => Ok(g),
                    CatalogArg::Int(_) => Err(bad("direct_product expects groups")),
                })
                .collect::<Result<_>>()?;
            match groups.as_slice() {
                [] => Err(bad("direct_product needs at least one factor")),
                [first, rest @ ..] => {
                    let mut acc = (*first).clone();
                    for g in rest {
                        acc = direct_product(&acc, g);
                    }
                    Ok(acc)
                }
            }
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn from_fn(name: String, n: usize, f: impl Fn(usize, usize) -> usize) -> FiniteGroup {
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[a * n + b] = f(a, b) as u32;
        }
    }
    FiniteGroup::from_flat_trusted(name, n, mul)
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(bad("cyclic order must be positive"));
    }
    Ok(from_fn(format!("cyclic({n})"), n, |a, b| (a + b) % n))
}

/// Dihedral group of order `n` (`n` even, `n ≥ 4`): element `r^i s^j` has
/// index `i + (n/2)·j`.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(bad("dihedral order must be even and at least 4"));
    }
    let m = n / 2;
    Ok(from_fn(format!("dihedral({n})"), n, |a, b| {
        let (i, j) = (a % m, a / m);
        let (k, l) = (b % m, b / m);
        let rot = if j == 0 { (i + k) % m } else { (i + m - k) % m };
        rot + m * ((j + l) % 2)
    }))
}

/// Generalized quaternion group of order `n = 2^k ≥ 8`:
/// `⟨a, b | a^{n/2} = 1, b² = a^{n/4}, b a b⁻¹ = a⁻¹⟩`, index `i + (n/2)·j`
/// for `a^i b^j`.
pub fn generalized_quaternion(n: usize) -> Result<FiniteGroup> {
    if n < 8 || !n.is_power_of_two() {
        return Err(bad("generalized quaternion order must be a power of 2, at least 8"));
    }
    let m = n / 2;
    let half = n / 4;
    Ok(from_fn(format!("generalized_quaternion({n})"), n, |x, y| {
        let (i, j) = (x % m, x / m);
        let (k, l) = (y % m, y / m);
        if j == 0 {
            (i + k) % m + m * l
        } else {
            // a^i b a^k b^l = a^{i-k} b^{1+l}
            let e = (i + m - k) % m;
            if l == 0 {
                e + m
            } else {
                (e + half) % m
            }
        }
    }))
}

pub fn elementary_abelian(p: usize, r: usize) -> Result<FiniteGroup> {
    if !crate::group::is_prime(p) {
        return Err(bad("elementary_abelian needs a prime"));
    }
    let n = p
        .checked_pow(r as u32)
        .filter(|&n| n <= 1 << 16)
        .ok_or_else(|| bad("elementary abelian group too large"))?;
    Ok(from_fn(format!("elementary_abelian({p},{r})"), n, |a, b| {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..r {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }))
}

/// Upper unitriangular 3×3 matrices over `F_p`; `(a, b, c)` has index
/// `a + p·b + p²·c` and `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
pub fn heisenberg_mod_p(p: usize) -> Result<FiniteGroup> {
    if !crate::group::is_prime(p) {
        return Err(bad("heisenberg_mod_p needs a prime"));
    }
    let n = p * p * p;
    Ok(from_fn(format!("heisenberg_mod_p({p})"), n, |x, y| {
        let (a, b, c) = (x % p, (x / p) % p, x / (p * p));
        let (a2, b2, c2) = (y % p, (y / p) % p, y / (p * p));
        (a + a2) % p + p * ((b + b2) % p) + p * p * ((c + c2 + a * b2) % p)
    }))
}

/// Extraspecial 2-group of order `2^{2n+1}` built as `F_2^{2n} × F_2` with the
/// cocycle given by a bilinear form `β`; squares are `q(v) = β(v, v)`.
///
/// Coordinates of `v` are `(x_1, y_1, …, x_n, y_n)` in bits `0..2n`; the
/// central bit is bit `2n`.
fn extraspecial(n: usize, minus: bool) -> Result<FiniteGroup> {
    if n == 0 || n > 3 {
        return Err(bad("extraspecial groups are supported for 1 <= n <= 3"));
    }
    let dim = 2 * n;
    let size = 1usize << (dim + 1);
    let vmask = (1usize << dim) - 1;
    let beta = move |v: usize, w: usize| -> usize {
        let mut s = 0;
        for i in 0..n {
            s ^= (v >> (2 * i)) & (w >> (2 * i + 1)) & 1;
        }
        if minus {
            let i = n - 1;
            s ^= (v >> (2 * i)) & (w >> (2 * i)) & 1;
            s ^= (v >> (2 * i + 1)) & (w >> (2 * i + 1)) & 1;
        }
        s
    };
    let kind = if minus { "minus" } else { "plus" };
    Ok(from_fn(format!("extraspecial_{kind}({n})"), size, move |a, b| {
        let (v, z) = (a & vmask, a >> dim);
        let (w, z2) = (b & vmask, b >> dim);
        (v ^ w) | (((z ^ z2 ^ beta(v, w)) & 1) << dim)
    }))
}

pub fn extraspecial_plus(n: usize) -> Result<FiniteGroup> {
    extraspecial(n, false)
}

pub fn extraspecial_minus(n: usize) -> Result<FiniteGroup> {
    extraspecial(n, true)
}

/// `A × B` with `(a, b)` at index `a + |A|·b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let na = a.order();
    from_fn(format!("{}*{}", a.name(), b.name()), na * b.order(), |x, y| {
        let (x1, x2) = (x % na, x / na);
        let (y1, y2) = (y % na, y / na);
        a.mul(x1, y1) + na * b.mul(x2, y2)
    })
}

/// `K ⋊ Q` where `action[q]` is the automorphism of `K` by which `q` acts;
/// `(k, q)(k', q') = (k · action[q](k'), q q')`, element `(k, q)` at
/// index `k + |K|·q`.
pub fn semidirect_product(k: &FiniteGroup, q: &FiniteGroup, action: &[GroupAutomorphism]) -> Result<FiniteGroup> {
    if action.len() != q.order() {
        return Err(bad("semidirect action needs one automorphism per element of Q"));
    }
    for x in q.elements() {
        for y in q.elements() {
            if action[q.mul(x, y)] != action[x].compose(&action[y]) {
                return Err(bad("semidirect action is not a homomorphism Q -> Aut(K)"));
            }
        }
    }
    let nk = k.order();
    Ok(from_fn(format!("{}:{}", k.name(), q.name()), nk * q.order(), |x, y| {
        let (k1, q1) = (x % nk, x / nk);
        let (k2, q2) = (y % nk, y / nk);
        k.mul(k1, action[q1].apply(k2)) + nk * q.mul(q1, q2)
    }))
}

/// `Z/n ⋊ Z/m` with the generator of `Z/m` acting by multiplication by `r`.
pub fn cyclic_semidirect(n: usize, m: usize, r: usize) -> Result<FiniteGroup> {
    if n == 0 || m == 0 {
        return Err(bad("semidirect_product orders must be positive"));
    }
    if num_integer::gcd(r, n) != 1 {
        return Err(bad("multiplier must be a unit mod n"));
    }
    let mut rm = 1 % n;
    for _ in 0..m {
        rm = rm * r % n;
    }
    if rm != 1 % n {
        return Err(bad("multiplier^m must be 1 mod n"));
    }
    let k = cyclic(n)?;
    let q = cyclic(m)?;
    let mut action = Vec::with_capacity(m);
    let mut mult = 1 % n;
    for _ in 0..m {
        let image = (0..n).map(|x| x * mult % n).collect();
        action.push(GroupAutomorphism::new(&k, image)?);
        mult = mult * r % n;
    }
    Ok(semidirect_product(&k, &q, &action)?.renamed(format!("semidirect_product({n},{m},{r})")))
}

pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 6 {
        return Err(bad("symmetric degree must be between 1 and 6"));
    }
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push((0..n).map(|i| (i + 1) % n).collect::<Vec<_>>());
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(t);
    }
    group_from_permutations(format!("symmetric({n})"), n, &gens, DEFAULT_CLOSURE_BOUND)
}

pub fn alternating(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 6 {
        return Err(bad("alternating degree must be between 1 and 6"));
    }
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|k| {
            let mut p: Vec<usize> = (0..n).collect();
            // 3-cycle (0 1 k)
            p[0] = 1;
            p[1] = k;
            p[k] = 0;
            p
        })
        .collect();
    group_from_permutations(format!("alternating({n})"), n, &gens, DEFAULT_CLOSURE_BOUND)
}

/// Parses and builds a catalog expression such as `cyclic(2)^2` or
/// `direct_product(cyclic(3),dihedral(6))`.
pub fn parse_group_expr(src: &str) -> Result<FiniteGroup> {
    let mut p = Parser {
        s: src.as_bytes(),
        pos: 0,
    };
    let g = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(Error::invalid(format!(
            "trailing input in group expression at {}",
            p.pos
        )));
    }
    Ok(g.renamed(src.trim()))
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "expected `{}` at position {}",
                c as char, self.pos
            )))
        }
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::invalid(format!("expected integer at position {start}")))
    }

    fn expr(&mut self) -> Result<FiniteGroup> {
        let mut g = self.term()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let h = self.term()?;
            g = direct_product(&g, &h);
        }
        Ok(g)
    }

    fn term(&mut self) -> Result<FiniteGroup> {
        let g = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.int()?;
            if k == 0 {
                return cyclic(1);
            }
            let mut acc = g.clone();
            for _ in 1..k {
                acc = direct_product(&acc, &g);
            }
            return Ok(acc);
        }
        Ok(g)
    }

    fn atom(&mut self) -> Result<FiniteGroup> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let g = self.expr()?;
            self.expect(b')')?;
            return Ok(g);
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string();
        if name.is_empty() {
            return Err(Error::invalid(format!("expected a group name at position {start}")));
        }
        self.expect(b'(')?;
        let mut args = Vec::new();
        if self.peek() != Some(b')') {
            loop {
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    args.push(CatalogArg::Int(self.int()?));
                } else {
                    args.push(CatalogArg::Group(self.expr()?));
                }
                if self.peek() == Some(b',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(b')')?;
        catalog(&name, &args)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{automorphism_group, center_and_derived, upper_central_series};

    #[test]
    fn basic_families() {
        let z9 = cyclic(9).unwrap();
        assert_eq!(z9.order(), 9);
        assert!(z9.is_abelian());
        let d8 = dihedral(8).unwrap();
        assert_eq!(d8.order_statistics(), vec![(1, 1), (2, 5), (4, 2)]);
        let q8 = generalized_quaternion(8).unwrap();
        assert_eq!(q8.order_statistics(), vec![(1, 1), (2, 1), (4, 6)]);
        let q16 = generalized_quaternion(16).unwrap();
        assert_eq!(q16.order_statistics(), vec![(1, 1), (2, 1), (4, 10), (8, 4)]);
        assert_eq!(elementary_abelian(2, 3).unwrap().exponent(), 2);
        assert_eq!(symmetric(4).unwrap().order(), 24);
        assert_eq!(alternating(4).unwrap().order(), 12);
    }

    #[test]
    fn heisenberg_structure() {
        let h = heisenberg_mod_p(3).unwrap();
        assert_eq!(h.order(), 27);
        let (z, d) = center_and_derived(&h);
        assert_eq!(z.order(), 3);
        assert_eq!(z, d);
        assert_eq!(upper_central_series(&h).len(), 3); // class 2
        assert_eq!(h.exponent(), 3);
    }

    #[test]
    fn extraspecial_shapes() {
        let minus1 = extraspecial_minus(1).unwrap();
        // quaternion relations: one involution, six elements of order 4
        assert_eq!(minus1.order_statistics(), vec![(1, 1), (2, 1), (4, 6)]);
        let plus1 = extraspecial_plus(1).unwrap();
        assert_eq!(plus1.order_statistics(), dihedral(8).unwrap().order_statistics());
        for g in [extraspecial_plus(2).unwrap(), extraspecial_minus(2).unwrap()] {
            assert_eq!(g.order(), 32);
            let (z, d) = center_and_derived(&g);
            assert_eq!(z.order(), 2);
            assert_eq!(z, d);
        }
        // 2^{1+4}_+ has 19 involutions, 2^{1+4}_- has 11
        assert_eq!(extraspecial_plus(2).unwrap().order_statistics()[1], (2, 19));
        assert_eq!(extraspecial_minus(2).unwrap().order_statistics()[1], (2, 11));
    }

    #[test]
    fn semidirect_families() {
        let f21 = cyclic_semidirect(7, 3, 2).unwrap();
        assert_eq!(f21.order(), 21);
        assert!(!f21.is_abelian());
        let dic12 = cyclic_semidirect(3, 4, 2).unwrap();
        assert_eq!(dic12.order_statistics(), vec![(1, 1), (2, 1), (3, 2), (4, 6), (6, 2)]);
        assert!(cyclic_semidirect(7, 3, 3).is_err());
        // D8 as Z4 : Z2 matches dihedral(8) up to order statistics
        assert_eq!(
            cyclic_semidirect(4, 2, 3).unwrap().order_statistics(),
            dihedral(8).unwrap().order_statistics()
        );
    }

    #[test]
    fn expressions() {
        let g = parse_group_expr("cyclic(2)^2").unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(automorphism_group(&g).unwrap().len(), 6);
        let g = parse_group_expr("cyclic(3) * dihedral(6)").unwrap();
        assert_eq!(g.order(), 18);
        let g = parse_group_expr("direct_product(cyclic(2), generalized_quaternion(8))").unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(parse_group_expr("heisenberg(3)").unwrap().order(), 27);
        assert!(matches!(parse_group_expr("nonsense(3)"), Err(Error::UnknownName(_))));
        assert!(matches!(parse_group_expr("dihedral(7)"), Err(Error::BadParameters(_))));
        assert!(parse_group_expr("cyclic(2) extra").is_err());
    }
}

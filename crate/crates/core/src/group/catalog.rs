//! Catalog constructors and the group spec grammar.
//!
//! Grammar: `name:param[:param]`, `A*B` for direct products, `central:A,B` for
//! central products, `@file.json` for a raw Cayley table.

use std::path::PathBuf;
use std::sync::Arc;

use super::{direct_product, quotient, Group, GroupJson, Subgroup, DEFAULT_MAX_ORDER};
use crate::error::{BvhError, Result};
use crate::field::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtraspecialKind {
    /// exponent p (p odd)
    ExpP,
    /// exponent p² (p odd)
    ExpP2,
    /// p = 2, central products of D8 only
    Plus,
    /// p = 2, one Q8 factor
    Minus,
}

/// A parsed group spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Elementary { p: u32, rank: u32 },
    Abelian(Vec<usize>),
    Dihedral(usize),
    Quaternion(usize),
    Semidihedral(usize),
    Extraspecial { p: u32, order: usize, kind: ExtraspecialKind },
    Modular(u32),
    Symmetric3,
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Central(Box<GroupSpec>, Box<GroupSpec>),
    File(PathBuf),
}

/// Spec strings for the standard catalog instances used by the verification suites.
pub fn catalog_groups() -> Vec<&'static str> {
    vec![
        "cyclic:2",
        "cyclic:3",
        "cyclic:4",
        "cyclic:5",
        "cyclic:8",
        "cyclic:9",
        "cyclic:16",
        "elementary:2:2",
        "elementary:2:3",
        "elementary:3:2",
        "abelian:2,4",
        "dihedral:8",
        "dihedral:16",
        "quaternion:8",
        "quaternion:16",
        "semidihedral:16",
        "modular:3",
        "extraspecial:3:27:expP",
        "dihedral:8*cyclic:2",
        "extraspecial:2:32:plus",
        "extraspecial:2:32:minus",
    ]
}

fn bad(msg: impl Into<String>) -> BvhError {
    BvhError::InvalidCatalog(msg.into())
}

fn parse_num(s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| bad(format!("`{s}` is not a positive integer")))
}

/// Exponent `n` with `order = p^n`, if any.
fn log_p(order: usize, p: usize) -> Option<u32> {
    let mut n = order;
    let mut k = 0;
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    (n == 1).then_some(k)
}

/// Split a comma-separated list of nested specs; commas followed by a digit belong to the current item.
fn split_specs(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for part in s.split(',') {
        let starts_digit = part.trim().chars().next().is_some_and(|c| c.is_ascii_digit());
        match out.last_mut() {
            Some(last) if starts_digit => {
                last.push(',');
                last.push_str(part);
            }
            _ => out.push(part.to_string()),
        }
    }
    out.into_iter().map(|s| s.trim().to_string()).collect()
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let text = text.trim();
        if let Some(path) = text.strip_prefix('@') {
            return Ok(GroupSpec::File(PathBuf::from(path)));
        }
        if let Some(rest) = text.strip_prefix("central:") {
            let parts = split_specs(rest);
            if parts.len() < 2 {
                return Err(bad("central product needs two factors"));
            }
            let mut acc = GroupSpec::parse(&parts[0])?;
            for p in &parts[1..] {
                acc = GroupSpec::Central(Box::new(acc), Box::new(GroupSpec::parse(p)?));
            }
            return Ok(acc);
        }
        if text.contains('*') {
            let mut parts = text.split('*');
            let mut acc = GroupSpec::parse(parts.next().unwrap())?;
            for p in parts {
                acc = GroupSpec::Product(Box::new(acc), Box::new(GroupSpec::parse(p)?));
            }
            return Ok(acc);
        }
        let mut it = text.split(':');
        let name = it.next().unwrap_or("").trim().to_ascii_lowercase();
        let params: Vec<&str> = it.collect();
        let one = |what: &str| -> Result<usize> {
            match params.as_slice() {
                [x] => parse_num(x),
                _ => Err(bad(format!("{what} takes one parameter"))),
            }
        };
        let spec = match name.as_str() {
            "cyclic" | "c" => GroupSpec::Cyclic(one("cyclic")?),
            "elementary" => match params.as_slice() {
                [n] => {
                    let n = parse_num(n)?;
                    let p = (2..=n).find(|d| n % d == 0).ok_or_else(|| bad("order must be > 1"))?;
                    let rank = log_p(n, p).ok_or_else(|| bad(format!("{n} is not a prime power")))?;
                    GroupSpec::Elementary { p: p as u32, rank }
                }
                [p, k] => GroupSpec::Elementary {
                    p: parse_num(p)? as u32,
                    rank: parse_num(k)? as u32,
                },
                _ => return Err(bad("elementary takes p^k or p:k")),
            },
            "abelian" => {
                let [list] = params.as_slice() else {
                    return Err(bad("abelian takes a comma-separated list of cyclic orders"));
                };
                let orders = list.split(',').map(parse_num).collect::<Result<Vec<_>>>()?;
                GroupSpec::Abelian(orders)
            }
            "dihedral" | "d" => GroupSpec::Dihedral(one("dihedral")?),
            "quaternion" | "q" => GroupSpec::Quaternion(one("quaternion")?),
            "semidihedral" | "sd" => GroupSpec::Semidihedral(one("semidihedral")?),
            "modular" => GroupSpec::Modular(one("modular")? as u32),
            "symmetric" => {
                if one("symmetric")? != 3 {
                    return Err(bad("only symmetric:3 is available"));
                }
                GroupSpec::Symmetric3
            }
            "extraspecial" => {
                let (p, order, kind) = match params.as_slice() {
                    [p, o, k] => (parse_num(p)? as u32, parse_num(o)?, *k),
                    _ => return Err(bad("extraspecial takes p:order:type")),
                };
                let kind = match k_lower(kind).as_str() {
                    "expp" => ExtraspecialKind::ExpP,
                    "expp2" => ExtraspecialKind::ExpP2,
                    "plus" | "+" => ExtraspecialKind::Plus,
                    "minus" | "-" => ExtraspecialKind::Minus,
                    other => return Err(bad(format!("unknown extraspecial type `{other}`"))),
                };
                GroupSpec::Extraspecial { p, order, kind }
            }
            _ => return Err(BvhError::UnknownGroup(text.to_string())),
        };
        Ok(spec)
    }

    pub fn build(&self, max_order: usize) -> Result<Group> {
        match self {
            GroupSpec::Cyclic(n) => cyclic(*n, max_order),
            GroupSpec::Elementary { p, rank } => {
                if !is_prime(*p) {
                    return Err(bad(format!("{p} is not prime")));
                }
                let orders = vec![*p as usize; *rank as usize];
                abelian(&orders, max_order).map(|g| g.with_prime(*p))
            }
            GroupSpec::Abelian(orders) => abelian(orders, max_order),
            GroupSpec::Dihedral(n) => dihedral(*n, max_order),
            GroupSpec::Quaternion(n) => quaternion(*n, max_order),
            GroupSpec::Semidihedral(n) => semidihedral(*n, max_order),
            GroupSpec::Modular(p) => modular(*p, max_order),
            GroupSpec::Symmetric3 => symmetric3(max_order),
            GroupSpec::Extraspecial { p, order, kind } => extraspecial(*p, *order, *kind, max_order),
            GroupSpec::Product(a, b) => {
                let a = Arc::new(a.build(max_order)?);
                let b = Arc::new(b.build(max_order)?);
                let prod = direct_product(&a, &b, max_order)?;
                Ok(Arc::try_unwrap(prod.group).unwrap_or_else(|g| (*g).clone()))
            }
            GroupSpec::Central(a, b) => {
                let a = Arc::new(a.build(max_order)?);
                let b = Arc::new(b.build(max_order)?);
                central_product(&a, &b, max_order)
            }
            GroupSpec::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let j: GroupJson = serde_json::from_str(&text)?;
                Group::from_json(&j, max_order)
            }
        }
    }
}

fn k_lower(s: &str) -> String {
    s.trim().to_ascii_lowercase()
}

/// Parse and build with the default order cap.
pub fn parse_group_spec(text: &str) -> Result<Group> {
    parse_group_spec_with_max(text, DEFAULT_MAX_ORDER)
}

pub fn parse_group_spec_with_max(text: &str, max_order: usize) -> Result<Group> {
    GroupSpec::parse(text)?.build(max_order)
}

fn check_order(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(bad("order must be positive"));
    }
    if n > max {
        return Err(BvhError::OrderTooLarge { order: n, max });
    }
    Ok(())
}

fn two_power(n: usize, min_exp: u32, what: &str) -> Result<()> {
    match log_p(n, 2) {
        Some(k) if k >= min_exp => Ok(()),
        _ => Err(bad(format!(
            "{what} needs order 2^n with n >= {min_exp}, got {n}"
        ))),
    }
}

/// Table of `r^k s^e` (index `k + m·e`) with `s r s^{-1} = r^t` and `s^2 = r^c`.
fn metacyclic_table(m: usize, t: usize, c: usize) -> Vec<Vec<usize>> {
    let n = 2 * m;
    let mul = |x: usize, y: usize| {
        let (a, e) = (x % m, x / m);
        let (b, f) = (y % m, y / m);
        let twisted = if e == 1 { b * t % m } else { b };
        let extra = if e == 1 && f == 1 { c } else { 0 };
        (a + twisted + extra) % m + m * ((e + f) % 2)
    };
    (0..n).map(|x| (0..n).map(|y| mul(x, y)).collect()).collect()
}

pub fn cyclic(n: usize, max: usize) -> Result<Group> {
    check_order(n, max)?;
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let gens = if n > 1 { vec![1] } else { vec![] };
    let mut g = Group::from_table(format!("C{n}"), &table, 0, None, max)?.with_generators(gens, &["g"]);
    if let Some(p) = (2..=n).find(|d| n.is_multiple_of(*d)) {
        if log_p(n, p).is_some() {
            g = g.with_prime(p as u32);
        }
    }
    Ok(g)
}

/// Product of cyclic groups with generators `a, b, c, ...`.
pub fn abelian(orders: &[usize], max: usize) -> Result<Group> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(bad("abelian needs positive cyclic orders"));
    }
    let n: usize = orders.iter().product();
    check_order(n, max)?;
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; orders.len()];
        for i in (0..orders.len()).rev() {
            d[i] = x % orders[i];
            x /= orders[i];
        }
        d
    };
    let undigits = |d: &[usize]| d.iter().zip(orders).fold(0, |acc, (&x, &o)| acc * o + x);
    let table: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let dx = digits(x);
            (0..n)
                .map(|y| {
                    let dy = digits(y);
                    let s: Vec<usize> = (0..orders.len()).map(|i| (dx[i] + dy[i]) % orders[i]).collect();
                    undigits(&s)
                })
                .collect()
        })
        .collect();
    let mut gens = Vec::new();
    let mut names = Vec::new();
    let letters = ["a", "b", "c", "d", "e", "f"];
    for (i, &o) in orders.iter().enumerate() {
        if o > 1 {
            let mut d = vec![0; orders.len()];
            d[i] = 1;
            gens.push(undigits(&d));
            names.push(*letters.get(i).ok_or_else(|| bad("at most six cyclic factors"))?);
        }
    }
    let name = orders.iter().map(|o| format!("C{o}")).collect::<Vec<_>>().join("x");
    let mut g = Group::from_table(name, &table, 0, None, max)?.with_generators(gens, &names);
    if let Some(p) = (2..=n).find(|d| n.is_multiple_of(*d)) {
        if log_p(n, p).is_some() {
            g = g.with_prime(p as u32);
        }
    }
    Ok(g)
}

/// `⟨g, h | g² = h² = (gh)^{n/2} = 1⟩`, with `γ = (gh)^{n/4}`.
pub fn dihedral(n: usize, max: usize) -> Result<Group> {
    two_power(n, 3, "dihedral")?;
    check_order(n, max)?;
    let m = n / 2;
    let table = metacyclic_table(m, m - 1, 0);
    let (g, h) = (m, (m - 1) + m);
    let grp = Group::from_table(format!("D{n}"), &table, 0, None, max)?
        .with_generators(vec![g, h], &["g", "h"]);
    let gamma = m / 2;
    Ok(grp.with_named("gamma", gamma).with_prime(2))
}

/// `⟨g, h | g² = h² = (gh)^{n/4}, (gh)^{n/2} = 1⟩`, with `γ = g²`.
pub fn quaternion(n: usize, max: usize) -> Result<Group> {
    two_power(n, 3, "quaternion")?;
    check_order(n, max)?;
    let m = n / 2;
    let table = metacyclic_table(m, m - 1, m / 2);
    // g = s, h = r s
    let (g, h) = (m, 1 + m);
    let grp = Group::from_table(format!("Q{n}"), &table, 0, None, max)?
        .with_generators(vec![g, h], &["g", "h"]);
    Ok(grp.with_named("gamma", m / 2).with_prime(2))
}

/// `⟨g, h | g² = 1, h^{n/2} = 1, ghg = h^{n/4 - 1}⟩`, with `γ = h^{n/4}`.
pub fn semidihedral(n: usize, max: usize) -> Result<Group> {
    two_power(n, 4, "semidihedral")?;
    check_order(n, max)?;
    let m = n / 2;
    let table = metacyclic_table(m, m / 2 - 1, 0);
    let (g, h) = (m, 1);
    let grp = Group::from_table(format!("SD{n}"), &table, 0, None, max)?
        .with_generators(vec![g, h], &["g", "h"]);
    Ok(grp.with_named("gamma", m / 2).with_prime(2))
}

/// `Z/p² ⋊ Z/p = ⟨g, h | g^{p²} = h^p = 1, h g h^{-1} = g^{1+p}⟩`.
pub fn modular(p: u32, max: usize) -> Result<Group> {
    if !is_prime(p) {
        return Err(bad(format!("{p} is not prime")));
    }
    let p = p as usize;
    let (m, n) = (p * p, p * p * p);
    check_order(n, max)?;
    // element g^a h^b has index a + m·b; h^b g^c h^{-b} = g^{c(1+p)^b}
    let mult_pow = |b: usize| (0..b).fold(1usize, |acc, _| acc * (1 + p) % m);
    let table: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let (a, b) = (x % m, x / m);
            (0..n)
                .map(|y| {
                    let (c, d) = (y % m, y / m);
                    (a + c * mult_pow(b)) % m + m * ((b + d) % p)
                })
                .collect()
        })
        .collect();
    let grp = Group::from_table(format!("M{n}"), &table, 0, None, max)?
        .with_generators(vec![1, m], &["g", "h"]);
    Ok(grp.with_named("z", p).with_prime(p as u32))
}

/// Heisenberg group of order p³: `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
fn heisenberg(p: u32, max: usize) -> Result<Group> {
    let p = p as usize;
    let n = p * p * p;
    check_order(n, max)?;
    let enc = |a: usize, b: usize, c: usize| a + p * b + p * p * c;
    let table: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let (a, b, c) = (x % p, (x / p) % p, x / (p * p));
            (0..n)
                .map(|y| {
                    let (a2, b2, c2) = (y % p, (y / p) % p, y / (p * p));
                    enc((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p)
                })
                .collect()
        })
        .collect();
    let grp = Group::from_table(format!("He{n}"), &table, 0, None, max)?
        .with_generators(vec![enc(1, 0, 0), enc(0, 1, 0)], &["g", "h"]);
    Ok(grp.with_named("z", enc(0, 0, 1)).with_prime(p as u32))
}

pub fn symmetric3(max: usize) -> Result<Group> {
    check_order(6, max)?;
    // r^k s^e with s r s^{-1} = r^{-1}
    let table = metacyclic_table(3, 2, 0);
    let grp = Group::from_table("S3", &table, 0, None, max)?.with_generators(vec![1, 3], &["r", "s"]);
    Ok(grp)
}

pub fn extraspecial(p: u32, order: usize, kind: ExtraspecialKind, max: usize) -> Result<Group> {
    if !is_prime(p) {
        return Err(bad(format!("{p} is not prime")));
    }
    let k = log_p(order, p as usize).filter(|k| *k >= 3 && k % 2 == 1).ok_or_else(|| {
        bad(format!("extraspecial order must be p^(1+2m), got {order} for p = {p}"))
    })?;
    let factors = ((k - 1) / 2) as usize;
    check_order(order, max)?;
    let (first, rest): (Group, Box<dyn Fn() -> Result<Group>>) = match (p, kind) {
        (2, ExtraspecialKind::Plus) => (dihedral(8, max)?, Box::new(move || dihedral(8, max))),
        (2, ExtraspecialKind::Minus) => (quaternion(8, max)?, Box::new(move || dihedral(8, max))),
        (2, _) => return Err(bad("for p = 2 the types are plus and minus")),
        (_, ExtraspecialKind::ExpP) => (heisenberg(p, max)?, Box::new(move || heisenberg(p, max))),
        (_, ExtraspecialKind::ExpP2) => (modular(p, max)?, Box::new(move || heisenberg(p, max))),
        (_, _) => return Err(bad("for odd p the types are expP and expP2")),
    };
    let mut acc = Arc::new(first);
    for _ in 1..factors {
        let next = Arc::new(rest()?);
        acc = Arc::new(central_product(&acc, &next, max)?);
    }
    let tag = match kind {
        ExtraspecialKind::ExpP => "expP",
        ExtraspecialKind::ExpP2 => "expP2",
        ExtraspecialKind::Plus => "plus",
        ExtraspecialKind::Minus => "minus",
    };
    let g = Arc::try_unwrap(acc).unwrap_or_else(|g| (*g).clone());
    Ok(g.with_name(format!("{tag}{order}")))
}

/// `A ∘ B`: the direct product with the smallest non-identity central elements identified.
/// Both centres must be cyclic of the same prime order.
pub fn central_product(a: &Arc<Group>, b: &Arc<Group>, max: usize) -> Result<Group> {
    let za = a.center();
    let zb = b.center();
    let p = za.order();
    if !is_prime(p as u32) || zb.order() != p {
        return Err(bad("central product needs centres of the same prime order"));
    }
    let ca = za.elements().iter().copied().find(|&x| x != a.identity()).unwrap();
    let cb = zb.elements().iter().copied().find(|&x| x != b.identity()).unwrap();
    let prod = direct_product(a, b, max.saturating_mul(p))?;
    let pg = &prod.group;
    let diag = prod.pair(ca, b.inv(cb));
    let n = Subgroup::generated(pg, &[diag]);
    let (q, f) = quotient(pg, &n)?;
    let mut q = Arc::try_unwrap(q).unwrap_or_else(|g| (*g).clone());
    let labels: Vec<String> = (0..q.order())
        .map(|c| {
            let x = (0..pg.order()).find(|&x| f.apply(x) == c).unwrap();
            format!("({},{})", a.label(prod.proj_left(x)), b.label(prod.proj_right(x)))
        })
        .collect();
    q = q.with_labels(labels).with_name(format!("{}o{}", a.name(), b.name()));
    if q.order() > max {
        return Err(BvhError::OrderTooLarge { order: q.order(), max });
    }
    let z = f.apply(prod.embed_left(ca));
    Ok(q.with_named("z", z).with_prime(p as u32))
}

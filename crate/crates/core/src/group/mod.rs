//! Finite groups given by explicit Cayley tables.
//!
//! Elements are indices `0..order`. Everything downstream (centralisers,
//! conjugacy classes, cochains) is derived from the multiplication table.

mod catalog;
mod hom;
mod subgroup;

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{BvhError, Result};

pub use catalog::{
    abelian, catalog_groups, central_product, cyclic, dihedral, extraspecial, modular, parse_group_spec,
    quaternion, semidihedral, symmetric3, parse_group_spec_with_max, ExtraspecialKind,
    GroupSpec,
};
pub use hom::{direct_product, quotient, DirectProduct, GroupHom};
pub use subgroup::{CharacteristicSubgroups, ConjugacyData, Subgroup};

/// Default cap on group orders.
pub const DEFAULT_MAX_ORDER: usize = 64;

#[derive(Clone, Debug)]
pub struct Group {
    name: String,
    order: usize,
    identity: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    labels: Vec<String>,
    generators: Vec<usize>,
    gen_names: Vec<String>,
    named: Vec<(String, usize)>,
    prime_hint: Option<u32>,
    fingerprint: u64,
}

/// Raw group input: `{"name", "order", "identity", "mul", "labels"}` with 0-based indices.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub name: String,
    pub order: usize,
    pub identity: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl Group {
    /// Validate a Cayley table and build a group.
    pub fn from_table(
        name: impl Into<String>,
        table: &[Vec<usize>],
        identity: usize,
        labels: Option<Vec<String>>,
        max_order: usize,
    ) -> Result<Group> {
        let n = table.len();
        if n == 0 {
            return Err(BvhError::InvalidTable("empty table".into()));
        }
        if n > max_order {
            return Err(BvhError::OrderTooLarge {
                order: n,
                max: max_order,
            });
        }
        if identity >= n {
            return Err(BvhError::InvalidTable(format!("identity {identity} out of range")));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(BvhError::InvalidTable(format!("row {a} has length {}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(BvhError::InvalidTable(format!("entry {x} out of range")));
                }
                mul.push(x as u16);
            }
        }
        for a in 0..n {
            if mul[identity * n + a] as usize != a || mul[a * n + identity] as usize != a {
                return Err(BvhError::InvalidTable(format!(
                    "{identity} is not a two-sided identity"
                )));
            }
        }
        let mut inv = vec![u16::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a * n + b] as usize == identity) {
                Some(b) if mul[b * n + a] as usize == identity => inv[a] = b as u16,
                _ => {
                    return Err(BvhError::InvalidTable(format!("element {a} has no inverse")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b] as usize;
                for c in 0..n {
                    let bc = mul[b * n + c] as usize;
                    if mul[ab * n + c] != mul[a * n + bc] {
                        return Err(BvhError::InvalidTable(format!(
                            "not associative on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return Err(BvhError::InvalidTable(format!(
                    "{} labels for {n} elements",
                    l.len()
                )))
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(Self::assemble(name.into(), mul, inv, identity, labels))
    }

    fn assemble(name: String, mul: Vec<u16>, inv: Vec<u16>, identity: usize, labels: Vec<String>) -> Group {
        let n = inv.len();
        let mut h = DefaultHasher::new();
        n.hash(&mut h);
        identity.hash(&mut h);
        mul.hash(&mut h);
        let fingerprint = h.finish();
        Group {
            name,
            order: n,
            identity,
            mul,
            inv,
            labels,
            generators: Vec::new(),
            gen_names: Vec::new(),
            named: Vec::new(),
            prime_hint: None,
            fingerprint,
        }
    }

    /// Build from a table already known to be a group (subgroups, products of valid groups).
    pub(crate) fn from_trusted_table(name: impl Into<String>, table: &[Vec<usize>], identity: usize) -> Group {
        let n = table.len();
        let mul: Vec<u16> = table.iter().flat_map(|r| r.iter().map(|&x| x as u16)).collect();
        let mut inv = vec![0u16; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] as usize == identity {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::assemble(name.into(), mul, inv, identity, labels)
    }

    pub fn from_json(j: &GroupJson, max_order: usize) -> Result<Group> {
        if j.order != j.mul.len() {
            return Err(BvhError::InvalidTable(format!(
                "order {} but table has {} rows",
                j.order,
                j.mul.len()
            )));
        }
        Group::from_table(j.name.clone(), &j.mul, j.identity, j.labels.clone(), max_order)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            name: self.name.clone(),
            order: self.order,
            identity: self.identity,
            mul: (0..self.order)
                .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
                .collect(),
            labels: Some(self.labels.clone()),
        }
    }

    pub(crate) fn with_generators(mut self, gens: Vec<usize>, gen_labels: &[&str]) -> Self {
        self.labels = word_labels(&self, &gens, gen_labels);
        self.generators = gens;
        self.gen_names = gen_labels.iter().map(|s| s.to_string()).collect();
        self
    }

    pub(crate) fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub(crate) fn with_named(mut self, name: &str, element: usize) -> Self {
        self.named.push((name.to_string(), element));
        self
    }

    pub(crate) fn with_prime(mut self, p: u32) -> Self {
        self.prime_hint = Some(p);
        self
    }

    pub(crate) fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.order);
        self.labels = labels;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `u a u^{-1}`
    #[inline]
    pub fn conj(&self, u: usize, a: usize) -> usize {
        self.mul(self.mul(u, a), self.inv(u))
    }

    /// `a b a^{-1} b^{-1}`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut r = self.identity;
        for _ in 0..e.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// The stored generators when they generate, else a greedy generating set by element index.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[self.identity] = true;
        let mut size = 1;
        for a in self.generators.iter().copied().chain(0..self.order) {
            if size == self.order {
                break;
            }
            if span[a] {
                continue;
            }
            gens.push(a);
            let mut frontier: Vec<usize> = (0..self.order).filter(|&x| span[x]).collect();
            while let Some(x) = frontier.pop() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !span[y] {
                        span[y] = true;
                        size += 1;
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }

    pub fn prime_hint(&self) -> Option<u32> {
        self.prime_hint
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_central(&self, g: usize) -> bool {
        (0..self.order).all(|a| self.mul(a, g) == self.mul(g, a))
    }

    /// `Some(p)` if the order is a power of the prime `p` (including order 1 with the hint or p = 2).
    pub fn prime_power(&self) -> Option<u32> {
        if self.order == 1 {
            return Some(self.prime_hint.unwrap_or(2));
        }
        let mut n = self.order;
        let mut p = 2;
        while !n.is_multiple_of(p) {
            p += 1;
        }
        while n.is_multiple_of(p) {
            n /= p;
        }
        (n == 1).then_some(p as u32)
    }

    /// Resolve an element by name, label or index.
    pub fn element(&self, name: &str) -> Result<usize> {
        let key = name.trim();
        if let Some((_, e)) = self.named.iter().find(|(n, _)| n == key) {
            return Ok(*e);
        }
        if key == "1" || key == "e" || key == "identity" {
            return Ok(self.identity);
        }
        if let Some(i) = self.labels.iter().position(|l| l == key) {
            return Ok(i);
        }
        if let Ok(i) = key.parse::<usize>() {
            if i < self.order {
                return Ok(i);
            }
        }
        self.evaluate_word(key)
            .ok_or_else(|| BvhError::UnknownElement(name.to_string()))
    }

    /// Evaluate a word such as `gh^3g^-1` in the named generators.
    fn evaluate_word(&self, word: &str) -> Option<usize> {
        if self.gen_names.is_empty() {
            return None;
        }
        let mut rest = word.trim();
        let mut acc = self.identity;
        if rest.is_empty() {
            return None;
        }
        while !rest.is_empty() {
            rest = rest.trim_start_matches(['*', '.', ' ']);
            if rest.is_empty() {
                break;
            }
            let (k, name) = self
                .gen_names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len())?;
            rest = &rest[name.len()..];
            let mut exp = 1i64;
            if let Some(r) = rest.strip_prefix('^') {
                let end = r
                    .char_indices()
                    .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                    .map_or(r.len(), |(i, _)| i);
                exp = r[..end].parse().ok()?;
                rest = &r[end..];
            }
            acc = self.mul(acc, self.pow(self.generators[k], exp));
        }
        Some(acc)
    }

    pub fn named_elements(&self) -> &[(String, usize)] {
        &self.named
    }

    /// Hash of the table together with labels and generators, which fix the chosen bases.
    pub fn presentation_key(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.fingerprint.hash(&mut h);
        self.labels.hash(&mut h);
        self.generators.hash(&mut h);
        h.finish()
    }

    pub fn same_as(&self, other: &Group) -> bool {
        self.fingerprint == other.fingerprint && self.mul == other.mul && self.identity == other.identity
    }

    pub fn into_arc(self) -> Arc<Group> {
        Arc::new(self)
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// Shortlex word labels relative to `gens`, found by breadth-first search.
fn word_labels(g: &Group, gens: &[usize], gen_labels: &[&str]) -> Vec<String> {
    let mut labels: Vec<Option<String>> = vec![None; g.order()];
    labels[g.identity()] = Some("1".to_string());
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(a) = queue.pop_front() {
        for (k, &s) in gens.iter().enumerate() {
            let b = g.mul(a, s);
            if labels[b].is_none() {
                let prefix = if a == g.identity() {
                    String::new()
                } else {
                    labels[a].clone().unwrap()
                };
                labels[b] = Some(append_letter(&prefix, gen_labels[k]));
                queue.push_back(b);
            }
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.unwrap_or_else(|| format!("#{i}")))
        .collect()
}

/// Append a generator to a word, folding repeats into powers: `g^2` then `g` gives `g^3`.
fn append_letter(word: &str, letter: &str) -> String {
    if let Some(stripped) = word.strip_suffix(letter) {
        if stripped.is_empty() || !stripped.ends_with('^') {
            return format!("{stripped}{letter}^2");
        }
    }
    if let Some(pos) = word.rfind('^') {
        let (head, exp) = (&word[..pos], &word[pos + 1..]);
        if head.ends_with(letter) && !exp.is_empty() && exp.chars().all(|c| c.is_ascii_digit()) {
            let e: u64 = exp.parse().unwrap();
            return format!("{head}^{}", e + 1);
        }
    }
    format!("{word}{letter}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3_table() -> Vec<Vec<usize>> {
        (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect()
    }

    #[test]
    fn validates_cyclic_table() {
        let g = Group::from_table("C3", &z3_table(), 0, None, 64).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.inv(1), 2);
        assert!(g.is_abelian());
        assert_eq!(g.prime_power(), Some(3));
    }

    #[test]
    fn rejects_bad_tables() {
        let mut t = z3_table();
        t[1][1] = 1;
        assert!(matches!(
            Group::from_table("bad", &t, 0, None, 64),
            Err(BvhError::InvalidTable(_))
        ));
        assert!(matches!(
            Group::from_table("bad", &z3_table(), 1, None, 64),
            Err(BvhError::InvalidTable(_))
        ));
        assert!(matches!(
            Group::from_table("big", &z3_table(), 0, None, 2),
            Err(BvhError::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn rejects_non_associative_loop() {
        // a Latin square with identity 0 that is not a group table
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = Group::from_table("loop", &t, 0, None, 64).unwrap_err();
        assert!(err.to_string().contains("associative"));
    }

    #[test]
    fn word_labels_fold_powers() {
        assert_eq!(append_letter("", "g"), "g");
        assert_eq!(append_letter("g", "g"), "g^2");
        assert_eq!(append_letter("g^2", "g"), "g^3");
        assert_eq!(append_letter("hg^2", "h"), "hg^2h");
        assert_eq!(append_letter("gh", "h"), "gh^2");
    }

    #[test]
    fn json_round_trip() {
        let g = Group::from_table("C3", &z3_table(), 0, None, 64).unwrap();
        let s = serde_json::to_string(&g.to_json()).unwrap();
        let j: GroupJson = serde_json::from_str(&s).unwrap();
        assert_eq!(Group::from_json(&j, 64).unwrap(), g);
    }
}

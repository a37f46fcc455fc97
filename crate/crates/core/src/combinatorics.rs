//! Enumeration of colorful partitions, monochromatic block partitions and
//! constrained set partitions.
//!
//! Colorful partitions are unlabeled: part `j` of a raw partition always
//! holds hyperplane `j` of the first class, and every other class contributes
//! a permutation. That gives `(r!)^d` raw partitions. When a class repeats a
//! hyperplane verbatim, many raw partitions induce the same simplices; those
//! are grouped into [`PartitionTypeClass`]es.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::geometry::ColoredArrangement;

/// Lexicographic `k`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

/// Advances `c` (a strictly increasing subset of `0..n`) to the next subset in
/// lexicographic order. Returns `false` when `c` was the last one.
pub fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Advances to the next permutation in lexicographic order.
pub fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[i - 1] < a[j]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        self.current = next_combination(&mut next, self.n).then_some(next);
        Some(out)
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// One hyperplane index per class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorfulTuple {
    pub picks: Vec<usize>,
}

/// `r` colorful tuples; for each class the picks form a permutation of
/// `0..r`. Parts are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorfulPartition {
    parts: Vec<ColorfulTuple>,
}

impl ColorfulPartition {
    pub fn new(mut parts: Vec<ColorfulTuple>) -> Self {
        parts.sort();
        ColorfulPartition { parts }
    }

    pub fn parts(&self) -> &[ColorfulTuple] {
        &self.parts
    }

    /// Per-class permutation invariant against `classes` classes of size `r`.
    pub fn is_valid(&self, classes: usize, r: usize) -> bool {
        if self.parts.len() != r || self.parts.iter().any(|t| t.picks.len() != classes) {
            return false;
        }
        (0..classes).all(|class| {
            let mut seen = vec![false; r];
            self.parts.iter().all(|t| {
                let i = t.picks[class];
                i < r && !std::mem::replace(&mut seen[i], true)
            })
        })
    }

    pub fn to_indices(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|t| t.picks.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTypeClass {
    pub representative: ColorfulPartition,
    pub multiplicity: u64,
}

/// All `(r!)^d` raw colorful partitions, in lexicographic order of the
/// per-class permutations.
#[derive(Debug, Clone)]
pub struct RawColorfulPartitions {
    perms: Vec<Vec<usize>>,
    done: bool,
}

impl RawColorfulPartitions {
    pub fn new(dimension: usize, parts: usize) -> Self {
        RawColorfulPartitions {
            perms: vec![(0..parts).collect(); dimension],
            done: false,
        }
    }
}

impl Iterator for RawColorfulPartitions {
    type Item = ColorfulPartition;

    fn next(&mut self) -> Option<ColorfulPartition> {
        if self.done {
            return None;
        }
        let r = self.perms.first().map_or(0, Vec::len);
        let parts = (0..r)
            .map(|j| {
                let mut picks = Vec::with_capacity(self.perms.len() + 1);
                picks.push(j);
                picks.extend(self.perms.iter().map(|p| p[j]));
                ColorfulTuple { picks }
            })
            .collect();
        // odometer; last class varies fastest
        self.done = true;
        for perm in self.perms.iter_mut().rev() {
            if next_permutation(perm) {
                self.done = false;
                break;
            }
            perm.sort_unstable();
        }
        Some(ColorfulPartition::new(parts))
    }
}

/// Identical-hyperplane bookkeeping for one arrangement: each hyperplane gets
/// the id of its locus within its class.
#[derive(Debug, Clone)]
pub struct ValueTable {
    /// `value_of[class][index]`
    value_of: Vec<Vec<usize>>,
    /// `members[class][value]`, ascending hyperplane indices
    members: Vec<Vec<Vec<usize>>>,
}

impl ValueTable {
    pub fn new(arrangement: &ColoredArrangement) -> Self {
        let mut value_of = Vec::new();
        let mut members = Vec::new();
        for class in arrangement.classes() {
            let mut keys = Vec::new();
            let mut ids = Vec::with_capacity(class.len());
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for (i, h) in class.iter().enumerate() {
                let key = h.canonical_key();
                let id = match keys.iter().position(|k| *k == key) {
                    Some(id) => id,
                    None => {
                        keys.push(key);
                        groups.push(Vec::new());
                        keys.len() - 1
                    }
                };
                ids.push(id);
                groups[id].push(i);
            }
            value_of.push(ids);
            members.push(groups);
        }
        ValueTable { value_of, members }
    }

    /// Canonical form of a partition: its parts as value tuples, sorted.
    /// Two raw partitions induce the same simplices iff their forms agree.
    pub fn canonical_form(&self, partition: &ColorfulPartition) -> Vec<Vec<usize>> {
        let mut form: Vec<Vec<usize>> = partition
            .parts()
            .iter()
            .map(|t| {
                t.picks
                    .iter()
                    .enumerate()
                    .map(|(class, &i)| self.value_of[class][i])
                    .collect()
            })
            .collect();
        form.sort();
        form
    }

    pub fn all_distinct(&self) -> bool {
        self.members
            .iter()
            .all(|groups| groups.iter().all(|g| g.len() == 1))
    }

    /// Realizes a canonical form with concrete hyperplane indices, taking
    /// indices of each value in ascending order.
    fn realize(&self, form: &[Vec<usize>]) -> ColorfulPartition {
        let mut cursor: Vec<Vec<usize>> = self.members.iter().map(|g| vec![0; g.len()]).collect();
        let parts = form
            .iter()
            .map(|values| {
                let picks = values
                    .iter()
                    .enumerate()
                    .map(|(class, &v)| {
                        let i = self.members[class][v][cursor[class][v]];
                        cursor[class][v] += 1;
                        i
                    })
                    .collect();
                ColorfulTuple { picks }
            })
            .collect();
        ColorfulPartition::new(parts)
    }

    /// Raw partitions collapsing onto `form`:
    /// `prod_class prod_value count! / prod_tuple multiplicity!`.
    fn multiplicity(&self, form: &[Vec<usize>]) -> u64 {
        let numer: u64 = self
            .members
            .iter()
            .flat_map(|groups| groups.iter().map(|g| factorial(g.len())))
            .product();
        let mut denom = 1u64;
        let mut run = 1usize;
        for w in form.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                denom *= factorial(run);
                run = 1;
            }
        }
        denom *= factorial(run);
        numer / denom
    }

    /// Every canonical form, generated directly as non-decreasing sequences
    /// of value tuples that exhaust each class's value counts.
    fn forms(&self) -> Vec<Vec<Vec<usize>>> {
        let mut counts: Vec<Vec<usize>> = self
            .members
            .iter()
            .map(|groups| groups.iter().map(Vec::len).collect())
            .collect();
        let r = counts[0].iter().sum::<usize>();
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(r);
        extend_forms(&mut counts, r, &mut prefix, &mut out);
        out
    }
}

fn extend_forms(
    counts: &mut [Vec<usize>],
    r: usize,
    prefix: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if prefix.len() == r {
        out.push(prefix.clone());
        return;
    }
    let classes = counts.len();
    let mut tuple = Vec::with_capacity(classes);
    next_tuples(counts, 0, &mut tuple, &mut |counts, tuple| {
        if prefix.last().is_some_and(|last| tuple < last.as_slice()) {
            return;
        }
        prefix.push(tuple.to_vec());
        extend_forms(counts, r, prefix, out);
        prefix.pop();
    });
}

type TupleVisitor<'a> = dyn FnMut(&mut [Vec<usize>], &[usize]) + 'a;

/// Visits every value tuple still available under `counts`, in lexicographic
/// order, with the tuple's values temporarily consumed.
fn next_tuples(
    counts: &mut [Vec<usize>],
    class: usize,
    tuple: &mut Vec<usize>,
    visit: &mut TupleVisitor<'_>,
) {
    if class == counts.len() {
        visit(counts, tuple);
        return;
    }
    for v in 0..counts[class].len() {
        if counts[class][v] == 0 {
            continue;
        }
        counts[class][v] -= 1;
        tuple.push(v);
        next_tuples(counts, class + 1, tuple, visit);
        tuple.pop();
        counts[class][v] += 1;
    }
}

/// Colorful partitions of the arrangement. With `up_to_symmetry`, one
/// representative per canonical form, weighted by how many raw partitions it
/// stands for; otherwise every raw partition with multiplicity one.
pub fn enumerate_colorful(
    arrangement: &ColoredArrangement,
    up_to_symmetry: bool,
) -> Vec<PartitionTypeClass> {
    if !up_to_symmetry {
        return RawColorfulPartitions::new(arrangement.dimension(), arrangement.parts())
            .map(|p| PartitionTypeClass {
                representative: p,
                multiplicity: 1,
            })
            .collect();
    }
    let table = ValueTable::new(arrangement);
    table
        .forms()
        .into_iter()
        .map(|form| PartitionTypeClass {
            representative: table.realize(&form),
            multiplicity: table.multiplicity(&form),
        })
        .collect()
}

/// Groups raw partitions by canonical form. Slow; kept as a cross-check for
/// [`enumerate_colorful`].
pub fn group_raw_by_form(arrangement: &ColoredArrangement) -> BTreeMap<Vec<Vec<usize>>, u64> {
    let table = ValueTable::new(arrangement);
    let mut groups = BTreeMap::new();
    for p in RawColorfulPartitions::new(arrangement.dimension(), arrangement.parts()) {
        *groups.entry(table.canonical_form(&p)).or_insert(0) += 1;
    }
    groups
}

pub fn canonical_form_of(
    arrangement: &ColoredArrangement,
    p: &ColorfulPartition,
) -> Vec<Vec<usize>> {
    ValueTable::new(arrangement).canonical_form(p)
}

/// Unordered partitions of `0..r*block` into `r` blocks of size `block`.
/// Each block is listed ascending; blocks are ordered by their least element.
#[derive(Debug, Clone)]
pub struct MonochromaticPartitions {
    n: usize,
    block: usize,
    /// per level: indices (into that level's remaining elements minus its
    /// minimum) of the other members of the block
    combos: Vec<Vec<usize>>,
    done: bool,
}

impl MonochromaticPartitions {
    pub fn new(r: usize, block: usize) -> Self {
        let combos = vec![(0..block.saturating_sub(1)).collect(); r];
        MonochromaticPartitions {
            n: r * block,
            block,
            combos,
            done: r == 0 || block == 0,
        }
    }

    /// `(r*block)! / (block!^r * r!)`
    pub fn count(r: usize, block: usize) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        fact(r * block) / (fact(block).pow(r as u32) * fact(r))
    }

    fn blocks(&self) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..self.n).collect();
        let mut blocks = Vec::with_capacity(self.combos.len());
        for combo in &self.combos {
            let rest = remaining.split_off(1);
            let mut block = remaining;
            let mut keep = Vec::with_capacity(rest.len());
            let mut c = combo.iter().peekable();
            for (i, e) in rest.into_iter().enumerate() {
                if c.peek() == Some(&&i) {
                    c.next();
                    block.push(e);
                } else {
                    keep.push(e);
                }
            }
            blocks.push(block);
            remaining = keep;
        }
        blocks
    }
}

impl Iterator for MonochromaticPartitions {
    type Item = Vec<Vec<usize>>;

    fn next(&mut self) -> Option<Vec<Vec<usize>>> {
        if self.done {
            return None;
        }
        let out = self.blocks();
        self.done = true;
        for level in (0..self.combos.len()).rev() {
            let pool = self.n - level * self.block - 1;
            if next_combination(&mut self.combos[level], pool) {
                for deeper in &mut self.combos[level + 1..] {
                    for (i, c) in deeper.iter_mut().enumerate() {
                        *c = i;
                    }
                }
                self.done = false;
                break;
            }
        }
        Some(out)
    }
}

/// Shape restrictions for [`search_set_partitions`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PartShape {
    /// This element must form a block by itself.
    pub singleton: Option<usize>,
    /// Every block other than the singleton has exactly this many elements.
    pub block_size: Option<usize>,
}

/// Visits the unordered partitions of `0..n` into exactly `k` nonempty
/// blocks that respect `shape` (restricted-growth order), stopping at the
/// first `Break`. Infeasible branches are pruned on sizes alone.
pub fn search_set_partitions<T>(
    n: usize,
    k: usize,
    shape: PartShape,
    mut visit: impl FnMut(&[Vec<usize>]) -> ControlFlow<T>,
) -> Option<T> {
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(k);
    match assign(0, n, k, shape, &mut blocks, &mut visit) {
        ControlFlow::Break(t) => Some(t),
        ControlFlow::Continue(()) => None,
    }
}

fn assign<T>(
    next: usize,
    n: usize,
    k: usize,
    shape: PartShape,
    blocks: &mut Vec<Vec<usize>>,
    visit: &mut impl FnMut(&[Vec<usize>]) -> ControlFlow<T>,
) -> ControlFlow<T> {
    if !feasible(next, n, k, shape, blocks) {
        return ControlFlow::Continue(());
    }
    if next == n {
        return visit(blocks);
    }
    let is_singleton_block = |b: &Vec<usize>| shape.singleton.is_some_and(|s| b[0] == s);
    if shape.singleton != Some(next) {
        for b in 0..blocks.len() {
            if is_singleton_block(&blocks[b]) {
                continue;
            }
            if shape.block_size.is_some_and(|s| blocks[b].len() >= s) {
                continue;
            }
            blocks[b].push(next);
            assign(next + 1, n, k, shape, blocks, visit)?;
            blocks[b].pop();
        }
    }
    if blocks.len() < k {
        blocks.push(vec![next]);
        assign(next + 1, n, k, shape, blocks, visit)?;
        blocks.pop();
    }
    ControlFlow::Continue(())
}

fn feasible(next: usize, n: usize, k: usize, shape: PartShape, blocks: &[Vec<usize>]) -> bool {
    let remaining = n - next;
    let singleton_pending = shape.singleton.is_some_and(|s| s >= next && s < n);
    let unopened = k - blocks.len();
    if unopened < usize::from(singleton_pending) {
        return false;
    }
    match shape.block_size {
        None => remaining >= unopened,
        // fixed sizes: the remaining elements must fill the blocks exactly
        Some(size) => {
            let deficits: usize = blocks
                .iter()
                .filter(|b| shape.singleton != Some(b[0]))
                .map(|b| size - b.len())
                .sum();
            let fresh = unopened - usize::from(singleton_pending);
            remaining == deficits + fresh * size + usize::from(singleton_pending)
        }
    }
}

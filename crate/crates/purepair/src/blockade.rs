//! Blockades: indexed sequences of pairwise disjoint nonempty vertex blocks.
//!
//! Indices are arbitrary strictly increasing integers; sub-blockades keep the
//! original indices, so supports computed before and after restriction talk
//! about the same blocks. Width is the minimum block size, length the number
//! of blocks.

use crate::bits::VertexSet;
use crate::frac::{ceil_mul, frac, Frac};
use crate::graph::Graph;
use crate::rng::rng_from_seed;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockadeError {
    #[error("a blockade needs at least one block")]
    NoBlocks,
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("blocks {0} and {1} intersect")]
    BlocksIntersect(usize, usize),
    #[error("block {0} leaves the host vertex range")]
    BlockOutOfRange(usize),
    #[error("indices must be strictly increasing")]
    IndexOrder,
    #[error("no block with index {0}")]
    UnknownIndex(usize),
    #[error("blockade is not equicardinal")]
    NotEquicardinal,
    #[error("target width {target} not in 1..={width}")]
    BadTargetWidth { target: usize, width: usize },
    #[error("length {length} not divisible by {r}")]
    LengthNotDivisible { length: usize, r: usize },
    #[error("contraction must keep the index set; got a mismatch at {0}")]
    ContractionIndexMismatch(usize),
    #[error("contraction block {0} is not a subset of the original")]
    ContractionNotSubset(usize),
    #[error("lambda must lie in (0, 1/2]")]
    LambdaRange,
    #[error("X intersects block {0}")]
    XIntersectsBlock(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blockade {
    n: usize,
    entries: Vec<(usize, VertexSet)>,
}

impl Blockade {
    /// Blocks get indices 1..=K in the order given.
    pub fn new(host: &Graph, blocks: Vec<VertexSet>) -> Result<Self, BlockadeError> {
        let entries = blocks.into_iter().enumerate().map(|(i, b)| (i + 1, b)).collect();
        Self::with_indices(host, entries)
    }

    pub fn with_indices(
        host: &Graph,
        entries: Vec<(usize, VertexSet)>,
    ) -> Result<Self, BlockadeError> {
        if entries.is_empty() {
            return Err(BlockadeError::NoBlocks);
        }
        let n = host.len();
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(BlockadeError::IndexOrder);
            }
        }
        for (i, b) in &entries {
            if b.is_empty() {
                return Err(BlockadeError::EmptyBlock(*i));
            }
            if b.universe() != n || b.iter().any(|v| v >= n) {
                return Err(BlockadeError::BlockOutOfRange(*i));
            }
        }
        for a in 0..entries.len() {
            for b in (a + 1)..entries.len() {
                if !entries[a].1.is_disjoint(&entries[b].1) {
                    return Err(BlockadeError::BlocksIntersect(entries[a].0, entries[b].0));
                }
            }
        }
        Ok(Blockade { n, entries })
    }

    #[inline]
    pub fn host_len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.entries.len()
    }

    pub fn width(&self) -> usize {
        self.entries.iter().map(|(_, b)| b.len()).min().unwrap()
    }

    pub fn is_equicardinal(&self) -> bool {
        let w = self.entries[0].1.len();
        self.entries.iter().all(|(_, b)| b.len() == w)
    }

    pub fn entries(&self) -> &[(usize, VertexSet)] {
        &self.entries
    }

    pub fn indices(&self) -> Vec<usize> {
        self.entries.iter().map(|(i, _)| *i).collect()
    }

    pub fn block(&self, index: usize) -> Option<&VertexSet> {
        self.position(index).map(|p| &self.entries[p].1)
    }

    /// Position of `index` in the entry list.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.entries.binary_search_by_key(&index, |(i, _)| *i).ok()
    }

    pub fn block_at(&self, pos: usize) -> &VertexSet {
        &self.entries[pos].1
    }

    pub fn index_at(&self, pos: usize) -> usize {
        self.entries[pos].0
    }

    /// Union of all blocks.
    pub fn union_set(&self) -> VertexSet {
        let mut s = VertexSet::new(self.n);
        for (_, b) in &self.entries {
            s.union_with(b);
        }
        s
    }

    /// Block index containing v, if any.
    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.entries.iter().find(|(_, b)| b.contains(v)).map(|(i, _)| *i)
    }

    /// Restriction to the given indices (which must all exist). Keeps the
    /// original index values: width never decreases, supports stay comparable.
    pub fn sub_blockade(&self, keep: &[usize]) -> Result<Blockade, BlockadeError> {
        if keep.is_empty() {
            return Err(BlockadeError::NoBlocks);
        }
        let mut keep = keep.to_vec();
        keep.sort();
        keep.dedup();
        let mut entries = Vec::with_capacity(keep.len());
        for i in keep {
            let p = self.position(i).ok_or(BlockadeError::UnknownIndex(i))?;
            entries.push(self.entries[p].clone());
        }
        Ok(Blockade { n: self.n, entries })
    }

    /// Shrinks blocks in place: same index set, every new block a nonempty
    /// subset of the old one. Length is unchanged.
    pub fn contraction(&self, shrunk: &[(usize, VertexSet)]) -> Result<Blockade, BlockadeError> {
        if shrunk.len() != self.entries.len() {
            return Err(BlockadeError::ContractionIndexMismatch(
                shrunk.first().map(|(i, _)| *i).unwrap_or(0),
            ));
        }
        let mut entries = Vec::with_capacity(shrunk.len());
        for ((i_old, b_old), (i_new, b_new)) in self.entries.iter().zip(shrunk) {
            if i_old != i_new {
                return Err(BlockadeError::ContractionIndexMismatch(*i_new));
            }
            if b_new.is_empty() {
                return Err(BlockadeError::EmptyBlock(*i_new));
            }
            if !b_new.is_subset(b_old) {
                return Err(BlockadeError::ContractionNotSubset(*i_new));
            }
            entries.push((*i_new, b_new.clone()));
        }
        Ok(Blockade { n: self.n, entries })
    }

    /// Contraction that shrinks only the named blocks, leaving the rest
    /// whole.
    pub fn contract_blocks(
        &self,
        shrunk: &[(usize, VertexSet)],
    ) -> Result<Blockade, BlockadeError> {
        let mut full: Vec<(usize, VertexSet)> = self.entries.clone();
        for (i, b) in shrunk {
            let p = self.position(*i).ok_or(BlockadeError::UnknownIndex(*i))?;
            full[p] = (*i, b.clone());
        }
        self.contraction(&full)
    }

    /// Equicardinal contraction keeping the lowest-indexed vertices of each
    /// block. `target` defaults to the current width.
    pub fn equicardinalize(&self, target: Option<usize>) -> Result<Blockade, BlockadeError> {
        let w = self.width();
        let t = target.unwrap_or(w);
        if t == 0 || t > w {
            return Err(BlockadeError::BadTargetWidth { target: t, width: w });
        }
        let entries = self
            .entries
            .iter()
            .map(|(i, b)| (*i, VertexSet::from_iter(self.n, b.iter().take(t))))
            .collect();
        Ok(Blockade { n: self.n, entries })
    }

    /// Groups consecutive runs of `r` blocks (in position order) into single
    /// blocks, reindexed 1..=length/r. Length must be divisible by r.
    pub fn interval_group(&self, r: usize) -> Result<Blockade, BlockadeError> {
        if r == 0 || self.length() % r != 0 {
            return Err(BlockadeError::LengthNotDivisible { length: self.length(), r });
        }
        let entries = self
            .entries
            .chunks(r)
            .enumerate()
            .map(|(h, chunk)| {
                let mut u = VertexSet::new(self.n);
                for (_, b) in chunk {
                    u.union_with(b);
                }
                (h + 1, u)
            })
            .collect();
        Ok(Blockade { n: self.n, entries })
    }

    /// Same blocks in reverse order, reindexed 1..=K. Left-rainbow copies in
    /// the original correspond to right-rainbow copies here.
    pub fn reverse(&self) -> Blockade {
        let entries = self
            .entries
            .iter()
            .rev()
            .enumerate()
            .map(|(j, (_, b))| (j + 1, b.clone()))
            .collect();
        Blockade { n: self.n, entries }
    }

    /// Content hash covering the host graph and every (index, block) pair.
    pub fn fingerprint(&self, host: &Graph) -> u64 {
        let mut h = host.fingerprint() ^ 0x9E37_79B9_7F4A_7C15;
        let mut eat = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
            h ^= h >> 29;
        };
        for (i, b) in &self.entries {
            eat(*i as u64);
            for v in b.iter() {
                eat(v as u64 + 1);
            }
            eat(u64::MAX);
        }
        h
    }
}

fn check_lambda(lambda: Frac) -> Result<(), BlockadeError> {
    if lambda <= frac(0, 1) || lambda > frac(1, 2) {
        return Err(BlockadeError::LambdaRange);
    }
    Ok(())
}

/// Vertices of block `index` with at least one neighbour in `x`.
fn covered_count(
    host: &Graph,
    b: &Blockade,
    index: usize,
    x: &VertexSet,
) -> Result<usize, BlockadeError> {
    let block = b.block(index).ok_or(BlockadeError::UnknownIndex(index))?;
    if !x.is_disjoint(block) {
        return Err(BlockadeError::XIntersectsBlock(index));
    }
    Ok(host.neighborhood_of_set(x).intersection(block).len())
}

/// At least lambda * width vertices of block `index` have a neighbour in `x`.
/// Requires an equicardinal blockade, x disjoint from the block, and
/// 0 < lambda <= 1/2. A set can both cover and miss the same block.
pub fn lambda_cover(
    host: &Graph,
    b: &Blockade,
    index: usize,
    x: &VertexSet,
    lambda: Frac,
) -> Result<bool, BlockadeError> {
    check_lambda(lambda)?;
    if !b.is_equicardinal() {
        return Err(BlockadeError::NotEquicardinal);
    }
    let covered = covered_count(host, b, index, x)?;
    Ok(covered >= ceil_mul(lambda, b.width()))
}

/// At least lambda * width vertices of block `index` have no neighbour in `x`.
pub fn lambda_miss(
    host: &Graph,
    b: &Blockade,
    index: usize,
    x: &VertexSet,
    lambda: Frac,
) -> Result<bool, BlockadeError> {
    check_lambda(lambda)?;
    if !b.is_equicardinal() {
        return Err(BlockadeError::NotEquicardinal);
    }
    let covered = covered_count(host, b, index, x)?;
    let w = b.width();
    Ok(w - covered >= ceil_mul(lambda, w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcavityWitness {
    pub h1: usize,
    pub h2: usize,
    pub h3: usize,
    pub x: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConcavityVerdict {
    /// Exhaustively verified: no triple h1 < h2 < h3 admits an X covering
    /// the middle block and missing the outer two.
    Concave,
    Refuted(ConcavityWitness),
    /// Sampling found no witness; says nothing beyond the sample count.
    Unrefuted { samples: u64 },
}

#[derive(Clone, Debug)]
pub enum ConcavityMode {
    /// All X subsets, all triples; `max_subsets` caps 2^(candidates) per
    /// triple before falling back to an Unrefuted verdict.
    Exhaustive { max_subsets: u64 },
    /// Structured families (single blocks, pair unions, neighbourhood
    /// slices) for every triple, then uniform random subsets up to `samples`.
    Sampled { samples: u64, seed: u64 },
}

/// Is the blockade lambda-concave? Requires equicardinal. A witness is a
/// triple of block indices h1 < h2 < h3 plus an X, disjoint from all three
/// blocks, that lambda-covers the middle one and lambda-misses the outer two.
pub fn is_concave(
    host: &Graph,
    b: &Blockade,
    lambda: Frac,
    mode: &ConcavityMode,
) -> Result<ConcavityVerdict, BlockadeError> {
    check_lambda(lambda)?;
    if !b.is_equicardinal() {
        return Err(BlockadeError::NotEquicardinal);
    }
    let idx = b.indices();
    let k = idx.len();
    if k < 3 {
        return Ok(ConcavityVerdict::Concave); // no triple exists
    }
    let all = b.union_set();
    let threshold = ceil_mul(lambda, b.width());
    let w = b.width();

    let is_witness = |h1: usize, h2: usize, h3: usize, x: &VertexSet| -> bool {
        if x.is_empty() {
            return false; // covers nothing
        }
        let nx = host.neighborhood_of_set(x);
        let cov2 = nx.intersection(b.block(h2).unwrap()).len();
        if cov2 < threshold {
            return false;
        }
        let miss1 = w - nx.intersection(b.block(h1).unwrap()).len();
        let miss3 = w - nx.intersection(b.block(h3).unwrap()).len();
        miss1 >= threshold && miss3 >= threshold
    };

    match mode {
        ConcavityMode::Exhaustive { max_subsets } => {
            for a in 0..k {
                for c in (a + 1)..k {
                    for e in (c + 1)..k {
                        let (h1, h2, h3) = (idx[a], idx[c], idx[e]);
                        let mut rest = all.clone();
                        rest.subtract(b.block(h1).unwrap());
                        rest.subtract(b.block(h2).unwrap());
                        rest.subtract(b.block(h3).unwrap());
                        let cand = rest.to_vec();
                        if cand.len() >= 63 || (1u64 << cand.len()) > *max_subsets {
                            return Ok(ConcavityVerdict::Unrefuted { samples: 0 });
                        }
                        for mask in 1u64..(1u64 << cand.len()) {
                            let x = VertexSet::from_iter(
                                b.host_len(),
                                cand.iter()
                                    .enumerate()
                                    .filter(|(j, _)| mask >> j & 1 == 1)
                                    .map(|(_, &v)| v),
                            );
                            if is_witness(h1, h2, h3, &x) {
                                return Ok(ConcavityVerdict::Refuted(ConcavityWitness {
                                    h1,
                                    h2,
                                    h3,
                                    x,
                                }));
                            }
                        }
                    }
                }
            }
            Ok(ConcavityVerdict::Concave)
        }
        ConcavityMode::Sampled { samples, seed } => {
            let mut tried = 0u64;
            // Structured candidates first: other single blocks and unions of
            // two, then per-vertex neighbourhood slices.
            for a in 0..k {
                for c in (a + 1)..k {
                    for e in (c + 1)..k {
                        let (h1, h2, h3) = (idx[a], idx[c], idx[e]);
                        let mut blocked = b.block(h1).unwrap().clone();
                        blocked.union_with(b.block(h2).unwrap());
                        blocked.union_with(b.block(h3).unwrap());

                        let mut candidates: Vec<VertexSet> = Vec::new();
                        let others: Vec<usize> =
                            idx.iter().copied().filter(|i| ![h1, h2, h3].contains(i)).collect();
                        for &i in &others {
                            candidates.push(b.block(i).unwrap().clone());
                        }
                        for ai in 0..others.len() {
                            for bi in (ai + 1)..others.len() {
                                candidates.push(
                                    b.block(others[ai])
                                        .unwrap()
                                        .union(b.block(others[bi]).unwrap()),
                                );
                            }
                        }
                        for v in blocked.iter() {
                            candidates.push(host.neighbors(v).difference(&blocked));
                        }
                        for x in candidates {
                            tried += 1;
                            if is_witness(h1, h2, h3, &x) {
                                return Ok(ConcavityVerdict::Refuted(ConcavityWitness {
                                    h1,
                                    h2,
                                    h3,
                                    x,
                                }));
                            }
                        }
                    }
                }
            }
            // Uniform random triples and subsets for the remaining budget.
            let mut rng = rng_from_seed(*seed);
            while tried < *samples {
                tried += 1;
                let mut picks = idx.clone();
                picks.shuffle(&mut rng);
                let mut three = [picks[0], picks[1], picks[2]];
                three.sort();
                let [h1, h2, h3] = three;
                let mut rest = all.clone();
                rest.subtract(b.block(h1).unwrap());
                rest.subtract(b.block(h2).unwrap());
                rest.subtract(b.block(h3).unwrap());
                let x = VertexSet::from_iter(
                    b.host_len(),
                    rest.iter().filter(|_| rng.gen_bool(0.5)),
                );
                if is_witness(h1, h2, h3, &x) {
                    return Ok(ConcavityVerdict::Refuted(ConcavityWitness { h1, h2, h3, x }));
                }
            }
            Ok(ConcavityVerdict::Unrefuted { samples: tried })
        }
    }
}

//! Monomial orders: lex, degrevlex and block (product) orders.

use std::cmp::Ordering;

use crate::exactpoly::{cmp_degrevlex, cmp_lex, Monomial, VarTable};

use super::GbError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Lex,
    DegRevLex,
}

/// One block of a product order: the variable indices in decreasing
/// significance and the order used inside the block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderBlock {
    pub vars: Vec<usize>,
    pub kind: BlockKind,
}

/// Monomial order on the variables of a table. Variable 0 is the largest
/// under `Lex` and `DegRevLex`. Under `Block`, earlier blocks dominate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    Block(Vec<OrderBlock>),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => cmp_lex(a, b),
            MonomialOrder::DegRevLex => cmp_degrevlex(a, b),
            MonomialOrder::Block(blocks) => {
                for blk in blocks {
                    let o = cmp_in_block(blk, a, b);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Checks that a block order partitions `0..nvars`.
    pub fn validate(&self, nvars: usize) -> Result<(), GbError> {
        let MonomialOrder::Block(blocks) = self else {
            return Ok(());
        };
        let mut seen = vec![false; nvars];
        for blk in blocks {
            if blk.vars.is_empty() {
                return Err(GbError::BadOrder("empty block".into()));
            }
            for &v in &blk.vars {
                if v >= nvars || seen[v] {
                    return Err(GbError::BadOrder(format!("variable index {v} out of range or repeated")));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GbError::BadOrder("blocks do not cover every variable".into()));
        }
        Ok(())
    }

    /// Block order from named blocks.
    pub fn blocks_by_name(vars: &VarTable, blocks: &[(&[&str], BlockKind)]) -> Result<Self, GbError> {
        let mut out = Vec::with_capacity(blocks.len());
        for (names, kind) in blocks {
            let idx = names.iter().map(|n| vars.require(n)).collect::<Result<Vec<_>, _>>()?;
            out.push(OrderBlock { vars: idx, kind: *kind });
        }
        let o = MonomialOrder::Block(out);
        o.validate(vars.len())?;
        Ok(o)
    }

    /// Elimination order: the variables in `elim` form a degrevlex block that
    /// dominates the remaining variables, which keep the order `self`
    /// induces on them.
    pub fn elimination(&self, nvars: usize, elim: &[usize]) -> MonomialOrder {
        let mut blocks = vec![OrderBlock {
            vars: elim.to_vec(),
            kind: BlockKind::DegRevLex,
        }];
        for mut blk in self.as_blocks(nvars) {
            blk.vars.retain(|v| !elim.contains(v));
            if !blk.vars.is_empty() {
                blocks.push(blk);
            }
        }
        if elim.is_empty() {
            blocks.remove(0);
        }
        MonomialOrder::Block(blocks)
    }

    /// The same order written as blocks over `0..nvars`.
    pub fn as_blocks(&self, nvars: usize) -> Vec<OrderBlock> {
        match self {
            MonomialOrder::Lex => vec![OrderBlock {
                vars: (0..nvars).collect(),
                kind: BlockKind::Lex,
            }],
            MonomialOrder::DegRevLex => vec![OrderBlock {
                vars: (0..nvars).collect(),
                kind: BlockKind::DegRevLex,
            }],
            MonomialOrder::Block(b) => b.clone(),
        }
    }

    /// True when the order compares total degree first.
    pub fn is_graded(&self) -> bool {
        match self {
            MonomialOrder::DegRevLex => true,
            MonomialOrder::Lex => false,
            MonomialOrder::Block(b) => b.len() == 1 && b[0].kind == BlockKind::DegRevLex,
        }
    }
}

fn cmp_in_block(blk: &OrderBlock, a: &Monomial, b: &Monomial) -> Ordering {
    match blk.kind {
        BlockKind::Lex => {
            for &v in &blk.vars {
                let o = a.exp(v).cmp(&b.exp(v));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        }
        BlockKind::DegRevLex => {
            let da: u32 = blk.vars.iter().map(|&v| a.exp(v) as u32).sum();
            let db: u32 = blk.vars.iter().map(|&v| b.exp(v) as u32).sum();
            if da != db {
                return da.cmp(&db);
            }
            for &v in blk.vars.iter().rev() {
                let o = b.exp(v).cmp(&a.exp(v));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_matches_plain_orders() {
        let m = |e: &[u16]| Monomial::from_exps(e);
        let cases = [m(&[1, 0, 2]), m(&[0, 3, 0]), m(&[2, 1, 0]), m(&[0, 0, 1]), m(&[1, 1, 1])];
        let drl_block = MonomialOrder::Block(MonomialOrder::DegRevLex.as_blocks(3));
        let lex_block = MonomialOrder::Block(MonomialOrder::Lex.as_blocks(3));
        for a in &cases {
            for b in &cases {
                assert_eq!(drl_block.cmp(a, b), cmp_degrevlex(a, b));
                assert_eq!(lex_block.cmp(a, b), cmp_lex(a, b));
            }
        }
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrder::DegRevLex.elimination(3, &[2]);
        let m = |e: &[u16]| Monomial::from_exps(e);
        assert_eq!(o.cmp(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
        assert!(o.validate(3).is_ok());
        assert!(MonomialOrder::Block(vec![OrderBlock { vars: vec![0], kind: BlockKind::Lex }])
            .validate(2)
            .is_err());
    }
}

//! Codebook encoding over two consecutive facet pairs, robust against
//! sanitizers that only disturb order within a pair or vertex rotation.
//!
//! Each pair is reduced to a canonical form: both facets vertex-canonical,
//! smaller facet first. Bit 1 iff the first pair's form is greater than the
//! second pair's.

use std::cmp::Ordering;

use super::order::{canonical_cmp, canonical_vertex_rotation, usable_indices};
use super::{check_capacity, BitSequence, ChannelCodec, ChannelId, CodecError};
use crate::stl::{Facet, StlModel};

type PairForm = (Facet, Facet);

fn pair_form(model: &StlModel, i: usize, j: usize) -> PairForm {
    let a = canonical_vertex_rotation(&model.facets[i]).expect("usable facets are non-degenerate");
    let b = canonical_vertex_rotation(&model.facets[j]).expect("usable facets are non-degenerate");
    if canonical_cmp(&a, &b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

fn form_cmp(p: &PairForm, q: &PairForm) -> Ordering {
    canonical_cmp(&p.0, &q.0).then_with(|| canonical_cmp(&p.1, &q.1))
}

fn quad_order(model: &StlModel, q: &[usize; 4]) -> Ordering {
    form_cmp(&pair_form(model, q[0], q[1]), &pair_form(model, q[2], q[3]))
}

/// Groups of four consecutive non-degenerate facets whose two pair forms differ.
pub fn robust_quads(model: &StlModel) -> Vec<[usize; 4]> {
    usable_indices(&model.facets)
        .chunks_exact(4)
        .map(|c| [c[0], c[1], c[2], c[3]])
        .filter(|q| quad_order(model, q) != Ordering::Equal)
        .collect()
}

/// Reaches the target bit by exchanging the two pairs' positions.
pub fn embed_robust_pair(model: &StlModel, payload: &BitSequence) -> Result<StlModel, CodecError> {
    let quads = robust_quads(model);
    check_capacity(ChannelId::RobustPair, payload.len(), quads.len())?;
    let mut out = model.clone();
    for (bit, q) in payload.iter().zip(&quads) {
        if (quad_order(&out, q) == Ordering::Greater) != bit {
            out.facets.swap(q[0], q[2]);
            out.facets.swap(q[1], q[3]);
        }
    }
    Ok(out)
}

pub fn extract_robust_pair(model: &StlModel, bits: usize) -> Result<BitSequence, CodecError> {
    let quads = robust_quads(model);
    check_capacity(ChannelId::RobustPair, bits, quads.len())?;
    Ok(quads[..bits]
        .iter()
        .map(|q| quad_order(model, q) == Ordering::Greater)
        .collect())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RobustPairCodec;

impl ChannelCodec for RobustPairCodec {
    type Carrier = StlModel;

    fn id(&self) -> ChannelId {
        ChannelId::RobustPair
    }

    fn capacity(&self, carrier: &StlModel) -> usize {
        robust_quads(carrier).len()
    }

    fn embed(&self, carrier: &StlModel, payload: &BitSequence) -> Result<StlModel, CodecError> {
        embed_robust_pair(carrier, payload)
    }

    fn extract(&self, carrier: &StlModel, bits: usize) -> Result<BitSequence, CodecError> {
        extract_robust_pair(carrier, bits)
    }
}

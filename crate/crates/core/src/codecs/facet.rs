use std::cmp::Ordering;

use super::order::{canonical_cmp, canonical_vertex_rotation, usable_indices};
use super::{check_capacity, BitSequence, ChannelCodec, ChannelId, CodecError};
use crate::stl::StlModel;

/// Disjoint pairs of consecutive non-degenerate facets whose canonical forms differ.
///
/// Swapping within a pair keeps the mask unchanged, so embed and extract
/// agree on it.
pub fn facet_pairs(model: &StlModel) -> Vec<(usize, usize)> {
    let usable = usable_indices(&model.facets);
    usable
        .chunks_exact(2)
        .map(|p| (p[0], p[1]))
        .filter(|&(i, j)| pair_order(model, i, j) != Ordering::Equal)
        .collect()
}

fn pair_order(model: &StlModel, i: usize, j: usize) -> Ordering {
    let canon = |k: usize| canonical_vertex_rotation(&model.facets[k]).expect("usable facets are non-degenerate");
    canonical_cmp(&canon(i), &canon(j))
}

/// Bit 1 orders a pair so the first facet is greater, bit 0 so it is smaller.
pub fn embed_facet(model: &StlModel, payload: &BitSequence) -> Result<StlModel, CodecError> {
    let pairs = facet_pairs(model);
    check_capacity(ChannelId::Facet, payload.len(), pairs.len())?;
    let mut out = model.clone();
    for (bit, &(i, j)) in payload.iter().zip(&pairs) {
        let greater = pair_order(&out, i, j) == Ordering::Greater;
        if greater != bit {
            out.facets.swap(i, j);
        }
    }
    Ok(out)
}

pub fn extract_facet(model: &StlModel, bits: usize) -> Result<BitSequence, CodecError> {
    let pairs = facet_pairs(model);
    check_capacity(ChannelId::Facet, bits, pairs.len())?;
    Ok(pairs[..bits]
        .iter()
        .map(|&(i, j)| pair_order(model, i, j) == Ordering::Greater)
        .collect())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FacetCodec;

impl ChannelCodec for FacetCodec {
    type Carrier = StlModel;

    fn id(&self) -> ChannelId {
        ChannelId::Facet
    }

    fn capacity(&self, carrier: &StlModel) -> usize {
        facet_pairs(carrier).len()
    }

    fn embed(&self, carrier: &StlModel, payload: &BitSequence) -> Result<StlModel, CodecError> {
        embed_facet(carrier, payload)
    }

    fn extract(&self, carrier: &StlModel, bits: usize) -> Result<BitSequence, CodecError> {
        extract_facet(carrier, bits)
    }
}

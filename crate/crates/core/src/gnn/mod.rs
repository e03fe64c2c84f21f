//! Graph encoders over TILGs: a relational graph network forward pass and a
//! hashed Weisfeiler-Lehman embedding that needs no weights.

mod features;
mod forward;
mod weights;
mod wl;

pub use features::{featurize, input_dim, FeatureError, NodeFeatures};
pub use forward::{forward, forward_with, Accumulation, Embedding, ForwardError};
pub use weights::{Layer, Matrix, ModelMetadata, ModelWeights, WeightError, WEIGHT_FORMAT_VERSION};
pub use wl::{wl_embedding, WL_EMBEDDING_LEN};

/// Default message-passing depth.
pub const DEFAULT_LAYERS: usize = 3;
pub const DEFAULT_HIDDEN: usize = 64;

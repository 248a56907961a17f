//! Chat-completion client with an on-disk response cache.
//!
//! Every reply is keyed by a hash of (model, prompt, sampling parameters),
//! so a warm cache replays an evaluation without touching the network.

mod cache;
mod client;
mod provider;
mod registry;
mod transport;

pub use cache::{cache_key, CacheEntry, CompletionCache};
pub use client::{Client, ClientError, Completion, RetryPolicy};
pub use provider::ProviderFamily;
pub use registry::{ModelRecord, ReferenceCorrelation, Registry, RegistryError, RequestParams};
pub use transport::{HttpRequest, HttpResponse, HttpTransport, Transport, TransportError};

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use thiserror::Error;

use super::{cache_key, CacheEntry, CompletionCache, ModelRecord, Transport, TransportError};

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("environment variable `{0}` with the API key is not set")]
    AuthMissing(String),
    #[error("rate limited after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("provider returned {status}: {body}")]
    ProviderError { status: u16, body: String },
    #[error("timed out after {attempts} attempts")]
    Timeout { attempts: u32 },
    #[error("transport failed after {attempts} attempts: {message}")]
    Transport { attempts: u32, message: String },
    #[error("unexpected response body: {0}")]
    BadResponse(String),
    #[error("model `{0}` has no endpoint configured")]
    NoEndpoint(String),
    #[error("offline and no cached reply for model `{0}`")]
    OfflineMiss(String),
    #[error("prompt is empty")]
    EmptyPrompt,
    #[error("cache: {0}")]
    Cache(#[from] std::io::Error),
}

/// Exponential backoff: attempt `k` (0-based) waits `base * 2^k`, capped
/// at `max_delay`, before attempt `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { max_attempts: 4, base_delay: Duration::from_millis(500), max_delay: Duration::from_secs(30) }
    }
}

impl RetryPolicy {
    pub fn delay(&self, attempt: u32) -> Duration {
        self.base_delay.saturating_mul(1u32 << attempt.min(16)).min(self.max_delay)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub reply: String,
    /// Network attempts made; 0 on a cache hit.
    pub attempts: u32,
    pub from_cache: bool,
}

type Sleeper = Arc<dyn Fn(Duration) + Send + Sync>;
type EnvLookup = Arc<dyn Fn(&str) -> Option<String> + Send + Sync>;

/// Shareable across threads; see [`Client::complete_batch`].
pub struct Client {
    transport: Option<Arc<dyn Transport>>,
    cache: Option<CompletionCache>,
    retry: RetryPolicy,
    sleeper: Sleeper,
    env: EnvLookup,
}

impl Client {
    fn base(transport: Option<Arc<dyn Transport>>, cache: Option<CompletionCache>) -> Self {
        Self {
            transport,
            cache,
            retry: RetryPolicy::default(),
            sleeper: Arc::new(std::thread::sleep),
            env: Arc::new(|k| std::env::var(k).ok()),
        }
    }

    /// A client that only answers from `cache`.
    pub fn offline(cache: CompletionCache) -> Self {
        Self::base(None, Some(cache))
    }

    pub fn new(transport: Arc<dyn Transport>, cache: Option<CompletionCache>) -> Self {
        Self::base(Some(transport), cache)
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_sleeper(mut self, sleeper: impl Fn(Duration) + Send + Sync + 'static) -> Self {
        self.sleeper = Arc::new(sleeper);
        self
    }

    /// Replaces the environment lookup used for API keys.
    pub fn with_env(mut self, env: impl Fn(&str) -> Option<String> + Send + Sync + 'static) -> Self {
        self.env = Arc::new(env);
        self
    }

    pub fn complete(&self, model: &ModelRecord, prompt: &str) -> Result<String, ClientError> {
        self.complete_detailed(model, prompt).map(|c| c.reply)
    }

    /// Cache first; on a miss one request with retries on 429, 5xx and
    /// transport failures. Other 4xx statuses fail immediately.
    pub fn complete_detailed(&self, model: &ModelRecord, prompt: &str) -> Result<Completion, ClientError> {
        if prompt.is_empty() {
            return Err(ClientError::EmptyPrompt);
        }
        let key = cache_key(model, prompt);
        if let Some(cache) = &self.cache {
            if let Some(entry) = cache.get(&key)? {
                return Ok(Completion { reply: entry.raw_reply, attempts: 0, from_cache: true });
            }
        }

        let Some(transport) = &self.transport else {
            return Err(ClientError::OfflineMiss(model.model_id.clone()));
        };
        let api_key = (self.env)(&model.auth_env_var)
            .filter(|v| !v.is_empty())
            .ok_or_else(|| ClientError::AuthMissing(model.auth_env_var.clone()))?;
        if model.endpoint.is_empty() {
            return Err(ClientError::NoEndpoint(model.model_id.clone()));
        }
        let request = model.provider.build_request(model, prompt, &api_key);

        let max = self.retry.max_attempts.max(1);
        let mut attempt = 0;
        loop {
            attempt += 1;
            let failure = match transport.send(&request) {
                Ok(resp) if (200..300).contains(&resp.status) => {
                    let (reply, meta) = model.provider.extract_reply(&resp.body).map_err(ClientError::BadResponse)?;
                    if attempt > 1 {
                        log::info!("{}: succeeded on attempt {attempt}", model.model_id);
                    }
                    if let Some(cache) = &self.cache {
                        cache.put(&CacheEntry::new(key, &model.model_id, reply.clone(), meta))?;
                    }
                    return Ok(Completion { reply, attempts: attempt, from_cache: false });
                }
                Ok(resp) if resp.status == 429 => ClientError::RateLimited { attempts: attempt },
                Ok(resp) if resp.status >= 500 => ClientError::ProviderError { status: resp.status, body: resp.body },
                Ok(resp) => return Err(ClientError::ProviderError { status: resp.status, body: resp.body }),
                Err(TransportError::Timeout) => ClientError::Timeout { attempts: attempt },
                Err(TransportError::Connect(message)) => ClientError::Transport { attempts: attempt, message },
            };
            if attempt >= max {
                log::warn!("{}: giving up after {attempt} attempts: {failure}", model.model_id);
                return Err(failure);
            }
            let delay = self.retry.delay(attempt - 1);
            log::warn!("{}: attempt {attempt}/{max} failed ({failure}), retrying in {delay:?}", model.model_id);
            (self.sleeper)(delay);
        }
    }

    /// Completes every prompt with at most `model.max_concurrency` requests
    /// in flight. Results are in input order; failures stay in place.
    pub fn complete_batch<S: AsRef<str> + Sync>(
        &self,
        model: &ModelRecord,
        prompts: &[S],
    ) -> Vec<Result<String, ClientError>> {
        let workers = model.max_concurrency.max(1).min(prompts.len());
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<Result<String, ClientError>>>> =
            Mutex::new((0..prompts.len()).map(|_| None).collect());

        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(prompt) = prompts.get(i) else { break };
                    let result = self.complete(model, prompt.as_ref());
                    slots.lock().expect("no worker panicked")[i] = Some(result);
                });
            }
        });

        slots.into_inner().expect("no worker panicked").into_iter().map(|r| r.expect("every slot filled")).collect()
    }
}

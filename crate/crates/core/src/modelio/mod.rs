//! Prompt templates and parsing of model replies.

mod numbers;
mod prompt;
mod response;

pub use numbers::{last_standalone_number, standalone_numbers};
pub use prompt::{PromptTemplate, Task, TemplateError, PLACEHOLDER};
pub use response::{
    parse_dependency_response, parse_lix_response, ExtractionMethod, NoRowsFound, ParseWarning, ParsedDepResponse,
    ParsedLixResponse, RowDefect,
};

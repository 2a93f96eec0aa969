"""Bridge between MT models and the prosody toolkit: hidden-state extraction
into HSF1 files, batch translation, the HTTP translation service, and a
fine-tuning runner. Talks to the toolkit only through its file formats,
HTTP contract, and CLI."""

from .extract import ExtractionJob, extract_hidden_states
from .finetune import finetune
from .hsf_writer import write_hsf1
from .server import make_server
from .translate import translate_batch, translate_texts

__version__ = "0.1.0"

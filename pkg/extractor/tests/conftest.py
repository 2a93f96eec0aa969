"""Shared fixture: a tiny randomly initialized Marian-architecture model.

Checkpoint downloads are unavailable in the test environment, so the
encoder-decoder contract is exercised with a locally constructed model of
the same class; every assertion here is about shapes, formats, and
alignment, never translation quality.
"""

import pytest
import torch
from tokenizers import Tokenizer, models, pre_tokenizers
from transformers import MarianConfig, MarianMTModel, PreTrainedTokenizerFast

WORDS = [
    "the", "cat", "sat", "on", "mat", "i", "was", "praised", "by", "my",
    "teacher", "he", "slept", "dog", "ran", "house", "built", "song", "sung",
    "story", "told", "it", "is", "what", "letter", "written", "yesterday",
    "room", "cleaned", "morning", "book", "moved", "repaired", "this", "a",
]


def build_tiny_model(directory, n_enc=2, n_dec=2, d_model=16, seed=0):
    vocab = {"<pad>": 0, "</s>": 1, "<unk>": 2}
    for word in WORDS:
        vocab[word] = len(vocab)
    backend = Tokenizer(models.WordLevel(vocab=vocab, unk_token="<unk>"))
    backend.pre_tokenizer = pre_tokenizers.Whitespace()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=backend, pad_token="<pad>", eos_token="</s>", unk_token="<unk>"
    )
    config = MarianConfig(
        vocab_size=len(vocab),
        d_model=d_model,
        encoder_layers=n_enc,
        decoder_layers=n_dec,
        encoder_attention_heads=2,
        decoder_attention_heads=2,
        encoder_ffn_dim=4 * d_model,
        decoder_ffn_dim=4 * d_model,
        max_position_embeddings=128,
        pad_token_id=0,
        eos_token_id=1,
        decoder_start_token_id=0,
        forced_eos_token_id=1,
    )
    torch.manual_seed(seed)
    model = MarianMTModel(config)
    model.eval()
    model.save_pretrained(directory)
    tokenizer.save_pretrained(directory)
    return directory


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("tiny_marian")
    return str(build_tiny_model(directory))

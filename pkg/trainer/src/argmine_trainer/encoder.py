"""Encoders with token- and sequence-classification heads.

The built-in "tiny" profile (2 transformer layers, 64 hidden units,
word-level vocabulary) trains from scratch in seconds on a CPU and exists
for desk-scale runs and CI.  Passing any other encoder name loads a
pretrained model through the transformers library (opt-in extra); its
subword pieces are aligned back to words by predicting each word's label
from its first subword.
"""

from __future__ import annotations

import torch
from torch import nn

TINY = "tiny"

# desk-scale profile: well under the 4-layer / 128-hidden ceiling
_TINY_LAYERS = 2
_TINY_HIDDEN = 64
_TINY_HEADS = 4
_TINY_FFN = 128
_TINY_MAX_LEN = 256


class TinyEncoder(nn.Module):
    def __init__(self, vocab_size: int, num_labels: int, token_level: bool, dropout: float):
        super().__init__()
        self.token_level = token_level
        self.embedding = nn.Embedding(vocab_size, _TINY_HIDDEN, padding_idx=0)
        self.positions = nn.Embedding(_TINY_MAX_LEN, _TINY_HIDDEN)
        layer = nn.TransformerEncoderLayer(
            d_model=_TINY_HIDDEN,
            nhead=_TINY_HEADS,
            dim_feedforward=_TINY_FFN,
            dropout=dropout,
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=_TINY_LAYERS)
        self.dropout = nn.Dropout(dropout)
        self.head = nn.Linear(_TINY_HIDDEN, num_labels)

    def forward(self, ids: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
        length = ids.shape[1]
        pos = torch.arange(length, device=ids.device).unsqueeze(0)
        hidden = self.embedding(ids) + self.positions(pos)
        hidden = self.encoder(hidden, src_key_padding_mask=~mask)
        hidden = self.dropout(hidden)
        if self.token_level:
            return self.head(hidden)
        denom = mask.sum(dim=1, keepdim=True).clamp(min=1)
        pooled = (hidden * mask.unsqueeze(-1)).sum(dim=1) / denom
        return self.head(pooled)


class PretrainedEncoder(nn.Module):
    """Wraps a transformers backbone; requires the [hf] extra."""

    def __init__(self, name: str, num_labels: int, token_level: bool, dropout: float):
        super().__init__()
        try:
            from transformers import AutoModel
        except ImportError as exc:
            raise RuntimeError(
                "encoder {name!r} needs the transformers library; install "
                "argmine-trainer[hf] or use the 'tiny' encoder"
            ) from exc
        self.token_level = token_level
        self.backbone = AutoModel.from_pretrained(name)
        hidden = self.backbone.config.hidden_size
        self.dropout = nn.Dropout(dropout)
        self.head = nn.Linear(hidden, num_labels)

    def forward(self, ids: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
        output = self.backbone(input_ids=ids, attention_mask=mask.long())
        hidden = self.dropout(output.last_hidden_state)
        if self.token_level:
            return self.head(hidden)
        denom = mask.sum(dim=1, keepdim=True).clamp(min=1)
        pooled = (hidden * mask.unsqueeze(-1)).sum(dim=1) / denom
        return self.head(pooled)


def build_encoder(
    name: str, vocab_size: int, num_labels: int, token_level: bool, dropout: float
) -> nn.Module:
    if name == TINY:
        return TinyEncoder(vocab_size, num_labels, token_level, dropout)
    return PretrainedEncoder(name, num_labels, token_level, dropout)

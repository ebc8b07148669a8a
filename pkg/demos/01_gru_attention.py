"""Run one sentence through the recurrent encoder and look at where the
attention layer puts its weight."""

import numpy as np

from emogru.data import Example, Vocabulary, decode, encode
from emogru.features import preprocess
from emogru.layers import ModelConfig, ModelParams, attention_forward, gru_forward

text = "ugh my phone died again and i lost everything"
ex = Example("demo", [text])
vocab = Vocabulary.build([ex])
ids, mask = encode(ex, vocab, max_len=16)

cfg = ModelConfig(vocab_size=len(vocab), emb_dim=16, hidden=8, att_dim=8, max_len=16,
                  use_aux_features=False)
params = ModelParams.init(cfg, seed=0)

x = params.embedding[ids]
states = gru_forward(x, mask, params.gru)
context, alpha = attention_forward(states, mask, params.attention)

print("tokens:", [t.surface for t in preprocess(text)])
print("hidden states:", states.shape, " context:", context.shape)
for tok, a in zip(decode(ids, mask, vocab), alpha):
    print(f"  {tok:>12s}  {a:.3f}  " + "#" * int(round(a * 100)))
print("padding gets exactly zero weight:", bool(np.all(alpha[mask == 0] == 0)))
print("weights sum to", alpha.sum())

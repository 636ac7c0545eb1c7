"""
Matching and clause tiers on a six-document corpus
==================================================

A clause is a small set of terms. Tier 1 holds every document containing
some selected clause, and a query is sent to Tier 1 when it contains one.
Because the query's clause is also inside every document the query
matches, those documents are all in Tier 1 and the answer is complete.
"""
from tierforge import ClauseIndex, Corpus, build_index, classify_document, classify_query, match

docs = [
    "red shirt striped",
    "blue shirt striped",
    "red shirt",
    "red pants striped",
    "blue pants striped",
    "blue pants",
]
corpus = Corpus.from_texts(docs)
index = build_index(corpus)
ids = lambda text: corpus.vocab.ids_of(text.split())

# postings and conjunctive matching
print("posting(red)              ", index.posting(corpus.vocab.get("red")).ids.tolist())
print("match(red shirt)          ", match(index, ids("red shirt")).ids.tolist())
print("match(blue pants striped) ", match(index, ids("blue pants striped")).ids.tolist())

# %%
# Select two clauses and look at both classifiers.
ci = ClauseIndex([ids("red"), ids("blue shirt")])
tier1 = [d.doc_id for d in corpus if classify_document(ci, d) == 1]
print("\nTier 1 documents:", tier1)

for q in ("blue shirt striped", "blue pants", "red pants"):
    tier = classify_query(ci, ids(q))
    m = match(index, ids(q)).ids.tolist()
    print(f"{q!r:22} -> tier {tier}, matches {m}")

# %%
# Every tier-1 query's match set sits inside Tier 1.
for q in ("red", "red shirt", "blue shirt", "red pants striped"):
    if classify_query(ci, ids(q)) == 1:
        assert set(match(index, ids(q)).ids.tolist()) <= set(tier1)
print("\nall tier-1 queries are fully answered by Tier 1")

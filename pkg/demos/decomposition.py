"""
Finding the finest independent decomposition
============================================

Reactions whose reaction vectors are tied together by linear dependence
must share a block. Everything else can be split apart.
"""

from plcrn import finest_independent_decomposition, parse_network, verify_independence

text = """
species A B C D E F
reaction R1: A <=> B
reaction R2: C -> D
reaction R3: D -> C
reaction R4: A + C -> B + D
reaction R5: E <=> F
"""
system = parse_network(text)
net = system.network
d = finest_independent_decomposition(net)
print("blocks:", d.labels(net))

rep = verify_independence(net, d)
print(f"ranks {rep.rank_blocks} add up to {rep.rank_whole}: {rep.stoich_independent}")

# %%
# R4 = R1 + R2 as vectors, so it glues the first two pairs into one block;
# the E/F pair touches none of them and stays separate.

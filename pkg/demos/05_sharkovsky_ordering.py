"""The generalized Sharkovsky ordering on (n+1)N union {1}.

F-iterating an n-to-1 map, stable orbit periods appear around the chaos
point in the order

  3(n+1) < 5(n+1) < 7(n+1) < ... < 2*3(n+1) < 2*5(n+1) < ...
        < 2^4(n+1) < 2^3(n+1) < 2^2(n+1) < 2(n+1) < (n+1) < 1

which is the classical Sharkovsky chain with every entry scaled by
n+1 (and 1 kept as itself).  Beyond the chaos point the windows appear
back-to-front: for n = 2, period 9 = 3*3 shows up at a = 13.97 and
period 15 = 3*5 at a = 13.883.
"""

from geniter import probe_seeds, sharkovsky_chain, sharkovsky_compare

print("Chain for n = 2 up to 60:")
print(" ", " < ".join(str(p) for p in sharkovsky_chain(2, 60)))

print("\nChain for n = 1 (classical ordering on the even numbers) up to 32:")
print(" ", " < ".join(str(p) for p in sharkovsky_chain(1, 32)))

print("\nComparisons (n = 2):")
for p, q in ((9, 15), (6, 3), (3, 1), (18, 36), (9, 6)):
    verdict = sharkovsky_compare(p, q, 2)
    first = p if verdict == "p-first" else q
    print(f"  {p} vs {q}: {first} comes first")

print("\nStable windows beyond chaos (seed-grid probing, 16x16):")
for a, target in ((13.97, 9), (13.883, 15)):
    hits = probe_seeds("logistic2", "F", a, target)
    seed = hits[0][0] if hits else None
    print(f"  a = {a}: period {target} found from seeds {seed}")

print("\nThe fourth-to-last chain entries explain what was seen in the")
print("cascade demo: ... < 24 < 12 < 6 < 3 < 1 read right-to-left is the")
print("doubling route into chaos.")

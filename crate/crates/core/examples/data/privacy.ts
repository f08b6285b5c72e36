# Privacy act scenario: no court order (C) ever; personal information (A) and
# medical information (D) collected at t1; the personal information destroyed
# (B) at t2. The chain t3, t4, ... with empty labels is folded into the
# self-looping sink tl.
props A B C D
state t0:
state t1: A D
state t2: B
state tl:
trans t0 -> t1
trans t1 -> t2
trans t2 -> tl
trans tl -> tl

"""The staged construction picks vertices that quickly outgrow machine
integers; print its stage log and the isolated vertices b_n."""
from radokit.constructions import build_g5, staged
from radokit.nat import render_short

b = build_g5(stages=6)
for line in b.stage_log:
    print(line)

st = staged()
for n in range(6):
    print(f"b_{n} = {render_short(st.B[n], 60)}")
    print("   isolated in E_n after switching:", b.result(f"E{n}-isolated").verdict.kind.value)

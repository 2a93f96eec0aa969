#!/usr/bin/env python3
"""Generate the bundled 120-pair EN-ZH demo corpus.

Composition: 40 positive-evidence candidates (BE passive -> marked passive,
negative context), 40 negative-evidence candidates (BE passive -> active,
neutral/favourable context; 5 of them light-verb renderings), and 40
distractors (20 active sources, 10 favourable marked-passive pairs that the
polarity gate must reject, 10 negative-context active pairs that the
negative-evidence filter must drop).
"""

import json
from pathlib import Path

pairs = []


def add(src, tgt, group):
    pairs.append((src, tgt, group))


SUBJECTS = [
    ("village", "村庄"), ("city", "城市"), ("house", "房子"), ("school", "学校"),
    ("bridge", "桥"), ("factory", "工厂"), ("shop", "商店"), ("garden", "花园"),
    ("wall", "墙"), ("street", "街道"),
]
for en, zh in SUBJECTS:
    add(f"The {en} was cruelly destroyed by the enemy.", f"{zh}被敌人摧毁了", "pos")
    add(f"The {en} was brutally burned by the fire.", f"{zh}被大火烧毁了", "pos")
    add(f"The {en} was violently ruined by the flood.", f"{zh}被洪水破坏了", "pos")
    add(f"The {en} was mercilessly attacked by the enemy.", f"{zh}被敌人损坏了", "pos")

OBJECTS = [
    ("letter", "信"), ("book", "书"), ("room", "房间"), ("homework", "作业"),
    ("article", "文章"), ("plan", "计划"), ("photo", "照片"), ("map", "地图"),
    ("report", "报告"), ("contract", "合同"), ("task", "任务"), ("luggage", "行李"),
    ("furniture", "家具"), ("machine", "机器"), ("tool", "工具"),
]
for en, zh in OBJECTS:
    add(f"The {en} was moved yesterday.", f"他昨天搬走了{zh}", "neg")
    add(f"The {en} was repaired this morning.", f"他今天早上修好了{zh}", "neg")

add("Oh yes, and I have been told they played all sorts of mad pranks.",
    "有的。人家和我说，他们做了好多发疯似的把戏。", "neg")
add("You were treated as a son in my friend's house.", "在我朋友家里是待你同儿子一样的", "neg")
add("That they have been preserved so well.", "它们保存得很好", "neg")
add("The dinner was arranged by the family.", "他们安排了晚饭", "neg")
add("The meeting was planned for today.", "他们今天安排了会议", "neg")

add("I was praised by my teacher.", "我受到了老师的表扬", "neg-light")
add("She was praised by her teacher.", "她受到了老师的表扬", "neg-light")
add("He was rewarded by the school.", "他受到了学校的奖励", "neg-light")
add("They were praised by the teachers.", "他们受到了老师的表扬", "neg-light")
add("The student was rewarded by the school.", "学生受到了学校的奖励", "neg-light")

ACTIVES = [
    ("The teacher praised me.", "老师表扬了我"),
    ("Zhangsan beat Lisi.", "张三打了李四"),
    ("They played games.", "他们玩了游戏"),
    ("He has a quilt.", "他有一床被子"),
    ("It is what it is.", "事已至此"),
    ("He reads books every day.", "他每天看书"),
    ("She writes letters.", "她写信"),
    ("We drink tea.", "我们喝茶"),
    ("They build houses.", "他们建造房子"),
    ("The police caught the thief.", "警察抓走了小偷"),
    ("He slept.", "他睡了"),
    ("The child draws pictures.", "孩子画画"),
    ("I finished my homework.", "我写完了作业"),
    ("She cleans the room.", "她打扫房间"),
    ("They planted trees.", "他们种了树"),
    ("He repaired the machine.", "他修好了机器"),
    ("We arranged the furniture.", "我们整理了家具"),
    ("The general led the soldiers.", "将军带着士兵"),
    ("She took the photo.", "她拿走了照片"),
    ("They translated the book.", "他们翻译了书"),
]
for en, zh in ACTIVES:
    add(en, zh, "distractor-active")

FAVOURABLE = [("I", "我"), ("She", "她"), ("He", "他"), ("We", "我们"), ("They", "他们")]
for en, zh in FAVOURABLE:
    add(f"{en} was warmly praised by my teacher.".replace("We was", "We were").replace("They was", "They were"),
        f"{zh}被老师表扬了", "distractor-favourable")
    add(f"{en} was warmly rewarded by the school.".replace("We was", "We were").replace("They was", "They were"),
        f"{zh}被学校奖励了", "distractor-favourable")

PERSONS = [("old man", "老人"), ("child", "孩子"), ("soldier", "士兵"), ("patient", "病人"), ("student", "学生")]
for en, zh in PERSONS:
    add(f"The {en} was cruelly abandoned.", f"他们无情地抛弃了{zh}", "distractor-negactive")
    add(f"The {en} was sadly betrayed.", f"他们无情地欺骗了{zh}", "distractor-negactive")


def main():
    assert len(pairs) == 120, len(pairs)
    out = Path(__file__).resolve().parents[1] / "src" / "prosodymt" / "data" / "synthetic_en_zh_120.jsonl"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for i, (src, tgt, group) in enumerate(pairs, start=1):
            record = {
                "id": f"p{i:03d}",
                "src": src,
                "tgt": tgt,
                "src_lang": "en",
                "tgt_lang": "zh",
                "meta": {"group": group},
            }
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    print(f"wrote {out} ({len(pairs)} pairs)")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Format the hand-labeled detector fixture corpus as JSONL.

Gold annotations are manual judgments over the documented tokenization;
marker_index is the token index of the passive marker (copula / 被 /
light verb). hint_count is the expected number of notional-passive hints.
"""

import json
from pathlib import Path

# (id, text, [(kind, marker_index), ...], hint_count)
EN = [
    ("en-01", "I was praised by my teacher.", [("be", 1)], 0),
    ("en-02", "It is what it is.", [], 0),
    ("en-03", "Oh yes, and I have been told they played all sorts of mad pranks.", [("be", 6)], 0),
    ("en-04", "He slept.", [], 0),
    ("en-05", "You were treated as a son in my friend's house.", [("be", 1)], 0),
    ("en-06", "That they have been preserved so well.", [("be", 3)], 0),
    ("en-07", "As Jiazhen was carried out, her hands firmly clasped her protruding belly.", [("be", 2)], 0),
    ("en-08", "The window was broken by the storm.", [("be", 2)], 0),
    ("en-09", "Rome wasn't built in a day.", [("be", 1)], 0),
    ("en-10", "The house is being built.", [("be", 2)], 0),
    ("en-11", "She was very badly treated.", [("be", 1)], 0),
    ("en-12", "Dinner is served.", [("be", 1)], 0),
    ("en-13", "He got promoted.", [], 0),
    ("en-14", "It was indeed a mistake.", [], 0),
    ("en-15", "The results were all published yesterday.", [("be", 2)], 0),
    ("en-16", "I am amazed.", [("be", 1)], 0),
    ("en-17", "You're invited.", [("be", 1)], 0),
    ("en-18", "It's done.", [("be", 1)], 0),
    ("en-19", "They were not informed.", [("be", 1)], 0),
    ("en-20", "The old bridge was demolished.", [("be", 3)], 0),
    ("en-21", "A hundred people came.", [], 0),
    ("en-22", "The cake was eaten.", [("be", 2)], 0),
    ("en-23", "His hatred was obvious.", [], 0),
    ("en-24", "The song was sung beautifully.", [("be", 2)], 0),
    ("en-25", "We are never told the truth.", [("be", 1)], 0),
    ("en-26", "The red car is fast.", [], 0),
    ("en-27", "The book was quickly forgotten.", [("be", 2)], 0),
    ("en-28", "Mistakes were made.", [("be", 1)], 0),
    ("en-29", "The letter has been written.", [("be", 3)], 0),
    ("en-30", "Nothing is sacred.", [], 0),
]

ZH = [
    ("zh-01", "我被老师表扬了", [("bei", 1)], 0),
    ("zh-02", "我受到了老师的表扬", [("light_verb", 1)], 0),
    ("zh-03", "张三打了李四", [], 0),
    ("zh-04", "李四被张三打了", [("bei", 1)], 0),
    ("zh-05", "家珍被拖出去时", [("bei", 1)], 0),
    ("zh-06", "有的。人家和我说，他们做了好多发疯似的把戏。", [], 0),
    ("zh-07", "在我朋友家里是待你同儿子一样的", [], 0),
    ("zh-08", "它们保存得很好", [], 1),
    ("zh-09", "它们都保存得十分完整", [], 1),
    ("zh-10", "他有一床被子", [], 0),
    ("zh-11", "被动句很常见", [], 0),
    ("zh-12", "那床棉被很暖和", [], 0),
    ("zh-13", "被告没有出庭", [], 0),
    ("zh-14", "他被骗了", [("bei", 1)], 0),
    ("zh-15", "房子被洪水淹没了", [("bei", 1)], 0),
    ("zh-16", "他的钱包被偷了", [("bei", 3)], 0),
    ("zh-17", "我被他们嘲笑了", [("bei", 1)], 0),
    ("zh-18", "书被拿走了", [("bei", 1)], 0),
    ("zh-19", "他被警察逮捕了", [("bei", 1)], 0),
    ("zh-20", "城市被大火摧毁了", [("bei", 1)], 0),
    ("zh-21", "他被开除了", [("bei", 1)], 0),
    ("zh-22", "我们被雨淋湿了", [("bei", 1)], 0),
    ("zh-23", "他遭到了惩罚", [("light_verb", 1)], 0),
    ("zh-24", "庄稼遭受了洪水的破坏", [("light_verb", 1)], 0),
    ("zh-25", "他受了伤", [("light_verb", 1)], 0),
    ("zh-26", "门被风吹开了", [("bei", 1)], 0),
    ("zh-27", "孩子被吓坏了", [("bei", 1)], 0),
    ("zh-28", "他们被赶出了村庄", [("bei", 1)], 0),
    ("zh-29", "老人被儿子抛弃了", [("bei", 1)], 0),
    ("zh-30", "这本书被翻译成了很多语言", [("bei", 3)], 0),
    ("zh-31", "他被人冤枉了", [("bei", 1)], 0),
    ("zh-32", "那个学生被老师批评了", [("bei", 3)], 0),
    ("zh-33", "衣服被吹走了", [("bei", 1)], 0),
    ("zh-34", "他是被逼的", [("bei", 2)], 0),
    ("zh-35", "饭被吃掉了", [("bei", 1)], 0),
    ("zh-36", "他穿着被子睡觉", [], 0),
    ("zh-37", "他们在被窝里聊天", [], 0),
    ("zh-38", "我的被套是新的", [], 0),
    ("zh-39", "作业写完了", [], 1),
    ("zh-40", "房子修好了", [], 1),
]

ES = [
    ("es-01", "Fuiste tratado como un hijo.", [("ser_estar", 0)], 0),
    ("es-02", "Es lo que es.", [], 0),
    ("es-03", "La casa fue construida por ellos.", [("ser_estar", 2)], 0),
    ("es-04", "El libro fue escrito por ella.", [("ser_estar", 2)], 0),
    ("es-05", "Está cansado.", [("ser_estar", 0)], 0),
    ("es-06", "Fue muy mal tratado.", [("ser_estar", 0)], 0),
    ("es-07", "La puerta estaba abierta.", [("ser_estar", 2)], 0),
    ("es-08", "Somos amigos.", [], 0),
    ("es-09", "¿Fue visto?", [("ser_estar", 1)], 0),
    ("es-10", "Ha sido visto en la ciudad.", [("ser_estar", 1)], 0),
    ("es-11", "Eran las tres.", [], 0),
    ("es-12", "Las cartas fueron enviadas ayer.", [("ser_estar", 2)], 0),
    ("es-13", "Estamos cansados.", [("ser_estar", 0)], 0),
    ("es-14", "El problema fue resuelto.", [("ser_estar", 2)], 0),
]


def main():
    out = Path(__file__).resolve().parents[1] / "src" / "prosodymt" / "data" / "detector_fixtures.jsonl"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for lang, rows in (("en", EN), ("zh", ZH), ("es", ES)):
            for fid, text, gold, hints in rows:
                record = {
                    "id": fid,
                    "lang": lang,
                    "text": text,
                    "gold": [{"kind": k, "marker_index": m} for k, m in gold],
                    "hint_count": hints,
                }
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()

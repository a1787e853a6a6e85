// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#pragma once

namespace driftlab {

// Built-in pronunciation lexicon (CMUdict format: word, two spaces,
// ARPABET with stress digits). Covers the built-in target phrases and the
// synthetic-corpus texts; pass --lexicon to use a larger dictionary.
// A copy is shipped at data/lexicon.txt.
inline const char* builtin_lexicon_text() {
  return R"(;;; driftlab built-in lexicon (CMUdict-format subset)
;;; word  ARPABET with stress digits
A  AH0
ABOVE  AH0 B AH1 V
AND  AH0 N D
AS  AE1 Z
BACKGROUND  B AE1 K G R AW2 N D
BAD  B AE1 D
BAG  B AE1 G
BED  B EH1 D
BEFORE  B IH0 F AO1 R
BEHIND  B IH0 HH AY1 N D
BENCHES  B EH1 N CH IH0 Z
BENEATH  B IH0 N IY1 TH
BEYOND  B IY0 AA1 N D
BIG  B IH1 G
BIOFORMS  B AY1 OW0 F AO2 R M Z
BIZARRE  B IH0 Z AA1 R
BLACK  B L AE1 K
BLOW  B L OW1
BONFIRES  B AA1 N F AY2 ER0 Z
BOX  B AA1 K S
BOXER  B AA1 K S ER0
BOXES  B AA1 K S AH0 Z
BRISKLY  B R IH1 S K L IY0
BROWN  B R AW1 N
CALL  K AO1 L
CRYPTIC  K R IH1 P T IH0 K
DAFT  D AE1 F T
DANCED  D AE1 N S T
DAYBREAK  D EY1 B R EY2 K
DIG  D IH1 G
DIZZY  D IH1 Z IY0
DO  D UW1
DOG  D AO1 G
DOMES  D OW1 M Z
DOOR  D AO1 R
DOWN  D AW1 N
DOZEN  D AH1 Z AH0 N
DRIVEN  D R IH1 V AH0 N
DWARF  D W AO1 R F
EMERGENCY  IH0 M ER1 JH AH0 N S IY0
EMISSIONS  IH0 M IH1 SH AH0 N Z
ENGINES  EH1 N JH AH0 N Z
EXPEDITE  EH1 K S P AH0 D AY2 T
FAX  F AE1 K S
FIDGETY  F IH1 JH AH0 T IY0
FISH  F IH1 SH
FIVE  F AY1 V
FLICKERING  F L IH1 K ER0 IH0 NG
FLIGHTY  F L AY1 T IY0
FLUX  F L AH1 K S
FOR  F AO1 R
FOX  F AA1 K S
FROG  F R AA1 G
FROZEN  F R OW1 Z AH0 N
GALA  G EY1 L AH0
GLASS  G L AE1 S
GLIB  G L IH1 B
GLOVED  G L AH1 V D
GO  G OW1
GRIZZLIES  G R IH1 Z L IY0 Z
HAZY  HH EY1 Z IY0
HELP  HH EH1 L P
HI  HH AY1
HIS  HH IH1 Z
HOW  HH AW1
HUMMING  HH AH1 M IH0 NG
I  AY1
IN  IH0 N
JAB  JH AE1 B
JABBED  JH AE1 B D
JACKALS  JH AE1 K AH0 L Z
JAM  JH AE1 M
JARS  JH AA1 R Z
JAW  JH AO1
JAY  JH EY1
JAZZ  JH AE1 Z
JELLIES  JH EH1 L IY0 Z
JIGGLED  JH IH1 G AH0 L D
JIGS  JH IH1 G Z
JIM  JH IH1 M
JITTERY  JH IH1 T ER0 IY0
JOCKS  JH AA1 K S
JOLLY  JH AA1 L IY0
JOLT  JH OW1 L T
JOVIAL  JH OW1 V IY0 AH0 L
JUDGE  JH AH1 JH
JUGGLE  JH AH1 G AH0 L
JUGS  JH AH1 G Z
JUMP  JH AH1 M P
JUMPED  JH AH1 M P T
JUMPS  JH AH1 M P S
JUMPSUITS  JH AH1 M P S UW2 T S
JUNGLE  JH AH1 NG G AH0 L
JUST  JH AH1 S T
KEPT  K EH1 P T
KINDLY  K AY1 N D L IY0
KITTEN  K IH1 T AH0 N
KNIGHTS  N AY1 T S
LAZY  L EY1 Z IY0
LIQUOR  L IH1 K ER0
MAD  M AE1 D
MAXIMIZE  M AE1 K S AH0 M AY2 Z
MY  M AY1
NO  N OW1
NYMPH  N IH1 M F
OF  AH1 V
OFF  AO1 F
ON  AA1 N
OPEN  OW1 P AH0 N
OPPONENT  AH0 P OW1 N AH0 N T
OVER  OW1 V ER0
PACK  P AE1 K
PANELS  P AE1 N AH0 L Z
PIG  P IH1 G
PLUMP  P L AH1 M P
POLYMORPHIC  P AA2 L IY0 M AO1 R F IH0 K
QUACK  K W AE1 K
QUACKING  K W AE1 K IH0 NG
QUANTUM  K W AA1 N T AH0 M
QUARTZ  K W AO1 R T S
QUICK  K W IH1 K
QUICKLY  K W IH1 K L IY0
QUIZ  K W IH1 Z
SEA  S IY1
SEES  S IY1 Z
SERVICES  S ER1 V AH0 S AH0 Z
SHE  SH IY1
SHHH  SH
SHOT  SH AA1 T
SPHINX  S F IH1 NG K S
STOP  S T AA1 P
TALK  T AO1 K
TALL  T AO1 L
TEACHERS  T IY1 CH ER0 Z
THE  DH AH0
TIM  T IH1 M
TO  T UW1
TUNES  T UW1 N Z
TWELVE  T W EH1 L V
TWILIGHT  T W AY1 L AY2 T
TWO  T UW1
UP  AH1 P
VELVET  V EH1 L V AH0 T
VEX  V EH1 K S
VEXING  V EH1 K S IH0 NG
VEXINGLY  V EH1 K S IH0 NG L IY0
VICTORS  V IH1 K T ER0 Z
VIXEN  V IH1 K S AH0 N
VORTEX  V AO1 R T EH2 K S
VOW  V AW1
WALKING  W AO1 K IH0 NG
WALTZ  W AO1 L T S
WANDER  W AA1 N D ER0
WAX  W AE1 K S
WAXY  W AE1 K S IY0
WESTWARD  W EH1 S T W ER0 D
WHILE  W AY1 L
WHIRLWIND  W ER1 L W IH2 N D
WHISPER  W IH1 S P ER0
WHISPERING  W IH1 S P ER0 IH0 NG
WILDLY  W AY1 L D L IY0
WINDS  W IH1 N D Z
WITH  W IH1 DH
WIZARD  W IH1 Z ER0 D
WOLVES  W UH1 L V Z
XENON  Z IY1 N AA0 N
YES  Y EH1 S
ZEBRA  Z IY1 B R AH0
ZEBRAS  Z IY1 B R AH0 Z
ZEPHYRS  Z EH1 F ER0 Z
ZIGZAGGING  Z IH1 G Z AE2 G IH0 NG
)";
}

}  // namespace driftlab

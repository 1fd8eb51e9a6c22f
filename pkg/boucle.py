# -*-coding:Utf-8 -*

"""
Ce fichier lance les commandes de l'inférence en boucle fermée.
Exécutez-le avec Python, par exemple :

- ``python boucle.py gen-data --out-dir donnees --severities 1,3,5``
- ``python boucle.py train --train donnees/train.csv --test donnees/test.csv --out-dir modeles``
- ``python boucle.py run --model modeles/modele.bin --train donnees/train.csv --test donnees/test.csv --out-dir sorties``
"""

import sys
from lib.commandes import main

if __name__ == "__main__":
    sys.exit(main())

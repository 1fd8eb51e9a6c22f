# -*-coding:Utf-8 -*

"""
Ce module contient les classes ``EntrainerBaseTest``, ``EntrainerJusquATest``, ``PrecisionTest`` et ``BancParDefautTest``.

``BancParDefautTest`` étalonne le banc d'essai par défaut avec les seuils de *test donnees/constantes.json*.
"""

from typing import Any, ClassVar, Dict, Final
import json
import os
import unittest
import numpy as np
from lib.donnees import JeuDonnees, SpecGenerateur, corrompre, generer_finegrained
from lib.entrainement import SpecModele, entrainer_base, entrainer_jusqu_a, perte_moyenne, precision_top_k
from lib.erreurs import ErreurConfiguration, ErreurDonnees
from lib.modele import ModeleEnCouches

dossier_donnees: Final[str] = os.path.join(os.path.dirname(__file__), "test donnees")


class EntrainerBaseTest(unittest.TestCase):
    """
    Test case utilisé pour tester ``entrainer_base()``.
    """

    def setUp(self) -> None:
        """
        Avant chaque test, génère un petit banc d'essai de 6 classes.
        """

        spec = SpecGenerateur(superclasses=2, sous_classes=3, dimension=6, par_classe_entrainement=20,
                              par_classe_test=10, graine=2)
        self.entrainement, self.test = generer_finegrained(spec)
        self.spec = SpecModele((12,), taille_lot=16)

    def test_architecture(self) -> None:
        """
        Le modèle a les dimensions ``[d, h1, ..., C]`` et la séparation par défaut est la moitié des couches.
        """

        modele, pertes = entrainer_base(SpecModele((10, 8, 7)), self.entrainement, 0, 0)
        self.assertEqual(modele.dimensions, [6, 10, 8, 7, 6])
        self.assertEqual(modele.separation, 2)
        self.assertEqual(pertes, [])

    def test_apprentissage(self) -> None:
        """
        La perte diminue et le modèle entraîné dépasse le hasard sur le jeu de test.
        """

        modele, pertes = entrainer_base(self.spec, self.entrainement, 15, 0)
        self.assertEqual(len(pertes), 15)
        self.assertLess(pertes[-1], pertes[0])
        self.assertLess(perte_moyenne(modele, self.entrainement), np.log(6))
        self.assertGreater(precision_top_k(modele, self.test), 1 / 6)

    def test_determinisme(self) -> None:
        """
        La même graine donne le même modèle, une autre graine un modèle différent.
        """

        premier, _ = entrainer_base(self.spec, self.entrainement, 2, 4)
        second, _ = entrainer_base(self.spec, self.entrainement, 2, 4)
        autre, _ = entrainer_base(self.spec, self.entrainement, 2, 5)
        self.assertEqual(premier.empreinte(), second.empreinte())
        self.assertNotEqual(premier.empreinte(), autre.empreinte())

    def test_arguments_invalides(self) -> None:
        """
        Un jeu vide lève ``ErreurDonnees``, un nombre d'époques négatif ``ErreurConfiguration``.
        """

        with self.assertRaises(ErreurDonnees):
            entrainer_base(self.spec, self.entrainement.sous_ensemble([]), 1, 0)
        with self.assertRaises(ErreurConfiguration):
            entrainer_base(self.spec, self.entrainement, -1, 0)


class EntrainerJusquATest(unittest.TestCase):
    """
    Test case utilisé pour tester ``entrainer_jusqu_a()``.
    """

    def setUp(self) -> None:
        """
        Avant chaque test, génère un petit banc d'essai de 6 classes.
        """

        spec = SpecGenerateur(superclasses=2, sous_classes=3, dimension=6, par_classe_entrainement=20,
                              par_classe_test=10, graine=2)
        self.entrainement, self.test = generer_finegrained(spec)
        self.spec = SpecModele((12,), taille_lot=16)

    def test_premier_palier_atteint(self) -> None:
        """
        Le modèle retenu est celui du premier palier dont la précision atteint la cible.
        """

        paliers = (1, 3, 15)
        precisions = [precision_top_k(entrainer_base(self.spec, self.entrainement, epoques, 0)[0], self.test)
                      for epoques in paliers]
        cible = max(precisions)
        attendu = next(indice for indice, precision in enumerate(precisions) if precision >= cible)
        modele, epoques, precision = entrainer_jusqu_a(self.spec, self.entrainement, self.test, cible, 0, paliers)
        self.assertEqual(epoques, paliers[attendu])
        self.assertEqual(precision, precisions[attendu])
        self.assertEqual(modele.empreinte(), entrainer_base(self.spec, self.entrainement, epoques, 0)[0].empreinte())

    def test_cible_inaccessible(self) -> None:
        """
        Si aucun palier n'atteint la cible, le dernier palier est retenu.
        """

        _, epoques, precision = entrainer_jusqu_a(self.spec, self.entrainement, self.test, 1.0, 0, (0,))
        self.assertEqual(epoques, 0)
        self.assertLess(precision, 1.0)

    def test_arguments_invalides(self) -> None:
        """
        Une liste de paliers vide ou une cible hors de ``(0, 1]`` lève ``ErreurConfiguration``.
        """

        with self.assertRaises(ErreurConfiguration):
            entrainer_jusqu_a(self.spec, self.entrainement, self.test, 0.5, 0, ())
        for cible in (0.0, 1.5):
            with self.assertRaises(ErreurConfiguration):
                entrainer_jusqu_a(self.spec, self.entrainement, self.test, cible, 0, (1,))


class PrecisionTest(unittest.TestCase):
    """
    Test case utilisé pour tester ``precision_top_k()``.
    """

    def setUp(self) -> None:
        """
        Avant chaque test, crée un modèle aléatoire et un jeu étiqueté aléatoirement.
        """

        generateur = np.random.default_rng(6)
        self.modele = ModeleEnCouches.creer([3, 8, 5], 6)
        self.jeu = JeuDonnees(generateur.normal(size=(40, 3)), generateur.integers(0, 5, size=40), 5)

    def test_top1_direct(self) -> None:
        """
        La précision top-1 est la part des argmax égaux à l'étiquette.
        """

        logits = self.modele.propager(self.jeu.caracteristiques)[1]
        attendu = float(np.mean(np.argmax(logits, axis=1) == self.jeu.etiquettes))
        self.assertEqual(precision_top_k(self.modele, self.jeu), attendu)

    def test_croissante_en_k(self) -> None:
        """
        La précision croît avec ``k`` et vaut 1 pour ``k >= C``.
        """

        precisions = [precision_top_k(self.modele, self.jeu, k) for k in range(1, 8)]
        self.assertEqual(precisions, sorted(precisions))
        self.assertEqual(precisions[4], 1.0)
        self.assertEqual(precisions[6], 1.0)

    def test_jeu_vide(self) -> None:
        """
        La précision d'un jeu vide vaut 0.
        """

        self.assertEqual(precision_top_k(self.modele, self.jeu.sous_ensemble([])), 0.0)


class BancParDefautTest(unittest.TestCase):
    """
    Banc d'essai par défaut (40 classes, 100 échantillons de test par classe) et modèle de base sous-entraîné jusqu'à la
    précision cible.
    """

    etalonnage: ClassVar[Dict[str, Any]]
    test: ClassVar[JeuDonnees]
    modele: ClassVar[ModeleEnCouches]
    precision: ClassVar[float]

    @classmethod
    def setUpClass(cls) -> None:
        """
        Génère le banc d'essai et entraîne le modèle de base une seule fois.
        """

        with open(os.path.join(dossier_donnees, "constantes.json"), encoding="utf-8") as fichier:
            cls.etalonnage = json.load(fichier)["etalonnage"]
        entrainement, cls.test = generer_finegrained(SpecGenerateur(par_classe_test=cls.etalonnage["par_classe_test"]))
        cls.modele, _, cls.precision = entrainer_jusqu_a(SpecModele(), entrainement, cls.test,
                                                         cls.etalonnage["cible_top1"], 0)

    def test_bande_de_precision(self) -> None:
        """
        La précision top-1 tombe dans la bande attendue et la précision top-5 la dépasse d'au moins dix points.
        """

        minimum, maximum = self.etalonnage["bande_top1"]
        self.assertGreater(self.precision, minimum)
        self.assertLess(self.precision, maximum)
        self.assertGreaterEqual(precision_top_k(self.modele, self.test, 5), self.precision + self.etalonnage["ecart_top5"])

    def test_erreurs_dans_la_superclasse(self) -> None:
        """
        Les erreurs restent plus souvent dans la superclasse de l'étiquette que des prédictions aux étiquettes
        permutées.
        """

        superclasses = np.asarray(self.test.superclasses)
        predites = np.argmax(self.modele.propager(self.test.caracteristiques)[1], axis=1)

        def part_meme_superclasse(etiquettes: np.ndarray) -> float:
            erreurs = predites != etiquettes
            return float(np.mean(superclasses[predites[erreurs]] == superclasses[etiquettes[erreurs]]))

        permutees = np.random.default_rng(0).permutation(self.test.etiquettes)
        self.assertGreater(part_meme_superclasse(self.test.etiquettes), part_meme_superclasse(permutees))

    def test_severites(self) -> None:
        """
        La précision ne croît pas avec la sévérité du bruit, et la sévérité 3 la divise environ par deux.
        """

        precisions = [precision_top_k(self.modele, corrompre(self.test, severite=severite)) for severite in range(1, 6)]
        tolerance = self.etalonnage["tolerance_severite"]
        for moins_bruite, plus_bruite in zip(precisions, precisions[1:]):
            self.assertLessEqual(plus_bruite, moins_bruite + tolerance)
        minimum, maximum = self.etalonnage["rapport_severite_3"]
        self.assertGreaterEqual(precisions[2] / self.precision, minimum)
        self.assertLessEqual(precisions[2] / self.precision, maximum)

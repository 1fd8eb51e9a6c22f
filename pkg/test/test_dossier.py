# -*-coding:Utf-8 -*

"""
Ce module contient la classe ``DossierTest``.

Les tests unitaires de la classe ``Dossier`` utilisent les fichiers du dossier *test donnees/jeux*.
"""

from typing import Final, List
from lib.dossier import Dossier, Entree, parcourir
from lib.fichier_donnees import FichierDonnees
import os
import unittest

dossier_courant: Final[str] = os.path.dirname(__file__)
dossier_de_test: Final[str] = os.path.join(dossier_courant, "test donnees", "jeux")
dossier_vide: Final[str] = os.path.join(dossier_courant, "test donnees", "dossier vide")
fichier_introuvable: Final[str] = "-"
fichier_vide: Final[str] = os.path.join(dossier_de_test, "vide.csv")
extension_introuvable: Final[str] = ".bin"


class DossierTest(unittest.TestCase):
    """
    Test case utilisé pour tester les fonctions du module **dossier**.
    """

    def setUp(self) -> None:
        """
        Avant chaque test, liste les fichiers CSV non vides du dossier *test donnees/jeux*.
        """

        self.fichiers_csv: List[str] = sorted(
            os.path.join(dossier_de_test, fichier) for fichier in os.listdir(dossier_de_test)
            if fichier.endswith(".csv") and os.path.getsize(os.path.join(dossier_de_test, fichier)))

    def test_lister_les_fichiers_par_dossier(self) -> None:
        """
        En passant un chemin de dossier en paramètre, teste si l'instance de la classe ``Dossier`` liste les fichiers
        non vides portant l'extension, par chemin croissant.
        """

        dossier = Dossier(chemin=dossier_de_test, extension=".csv")
        self.assertEqual([entree.chemin for entree in dossier.entrees], self.fichiers_csv)
        self.assertEqual(len(dossier), len(self.fichiers_csv))
        self.assertNotIn("vide", [nom for nom, _ in dossier.elements()])
        self.assertEqual({entree.extension for entree in dossier.entrees}, {".csv"})
        self.assertEqual([nom for nom, _ in Dossier(chemin=dossier_de_test, extension=".txt").elements()], ["notes"])

    def test_lister_les_fichiers_par_fichier(self) -> None:
        """
        En passant un chemin de fichier en paramètre, teste si l'instance de la classe ``Dossier`` liste le fichier indiqué.
        """

        for fichier in self.fichiers_csv:
            self.assertEqual([entree.chemin for entree in Dossier(chemin=fichier).entrees], [fichier])

    def test_fichier_introuvable(self) -> None:
        """
        A l'instanciation de la classe ``Dossier``, une exception ``FileNotFoundError`` est levée si un fichier est inexistant.
        """

        with self.assertRaises(FileNotFoundError):
            Dossier(chemin=fichier_introuvable)

    def test_extension_introuvable(self) -> None:
        """
        A l'instanciation de la classe ``Dossier``, une exception ``FileNotFoundError`` est levée si aucun fichier ne comporte
        l'extension passée en paramètre.
        """

        with self.assertRaises(FileNotFoundError):
            Dossier(chemin=dossier_de_test, extension=extension_introuvable)

    def test_fichier_vide(self) -> None:
        """
        A l'instanciation de la classe ``Dossier``, une exception ``EOFError`` est levée si le fichier indiqué est vide.
        """

        with self.assertRaises(EOFError):
            Dossier(chemin=fichier_vide)

    def test_dossier_vide(self) -> None:
        """
        A l'instanciation de la classe ``Dossier``, une exception ``FileNotFoundError`` est levée si le dossier indiqué ne
        contient aucun jeu de données.
        """

        with self.assertRaises(FileNotFoundError):
            Dossier(chemin=dossier_vide)

    def test_lire_les_jeux(self) -> None:
        """
        La classe ``FichierDonnees`` est instanciée pour chaque fichier : seuls les deux jeux valides sont conservés, avec
        leur jeu relu.
        """

        dossier = Dossier(chemin=dossier_de_test, extension=".csv", classe=FichierDonnees)
        elements = dossier.elements()
        self.assertEqual([nom for nom, _ in elements], ["valide_1", "valide_2"])
        self.assertEqual([contenu.jeu.nombre_classes for _, contenu in elements], [3, 4])

    def test_aucun_jeu_valide(self) -> None:
        """
        Une exception ``FileNotFoundError`` est levée si aucun fichier n'a de contenu valide.
        """

        with self.assertRaises(FileNotFoundError):
            Dossier(chemin=os.path.join(dossier_de_test, "invalide_valeur.csv"), classe=FichierDonnees)

    def test_parcourir(self) -> None:
        """
        ``parcourir()`` produit les fichiers portant l'extension par chemin croissant, vides compris.
        """

        attendus = sorted(os.path.join(dossier_de_test, fichier) for fichier in os.listdir(dossier_de_test)
                          if fichier.endswith(".csv"))
        self.assertEqual(list(parcourir(dossier_de_test, ".csv")), attendus)
        self.assertIn(fichier_vide, attendus)
        self.assertEqual(list(parcourir(fichier_vide, ".bin")), [fichier_vide])

    def test_entrees(self) -> None:
        """
        Chaque entrée retenue décrit son fichier, sans contenu quand aucune classe n'est fournie.
        """

        entree = Dossier(chemin=self.fichiers_csv[0]).entrees[0]
        self.assertIsInstance(entree, Entree)
        self.assertEqual(entree.chemin, self.fichiers_csv[0])
        self.assertEqual(entree.extension, ".csv")
        self.assertEqual(entree.taille, os.path.getsize(self.fichiers_csv[0]))
        self.assertIsNone(entree.contenu)

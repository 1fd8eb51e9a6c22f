# -*-coding:Utf-8 -*

"""
Ce module contient les classes ``ValidateurTest`` et ``CommandesTest``.

``CommandesTest`` génère un petit banc d'essai et entraîne un modèle dans un dossier temporaire, puis appelle ``main()``
comme le ferait la ligne de commande.
"""

from typing import Any, ClassVar, Dict, List, Tuple
import argparse
import contextlib
import csv
import io
import json
import os
import tempfile
import unittest
from lib.commandes import main, validateur_entier_positif, validateur_entier_positif_ou_nul, validateur_epsilon, \
    validateur_liste_entiers, validateur_proportion, validateur_reel_positif, validateur_suffixe

dossier_courant = os.path.dirname(__file__)
fichier_configuration = os.path.join(dossier_courant, "test donnees", "configuration.txt")


def lancer(*arguments: str) -> Tuple[int, str]:
    """
    :return: code de sortie et sortie standard de ``main(arguments)``.
    """

    sortie = io.StringIO()
    with contextlib.redirect_stdout(sortie):
        code = main(list(arguments))
    return code, sortie.getvalue()


def lire_csv(chemin: str) -> List[List[str]]:
    with open(chemin, newline='') as fichier:
        return list(csv.reader(fichier))


def rapport_deterministe(chemin: str) -> Dict[str, Any]:
    """
    :return: rapport JSON sans les temps ni le dossier de sortie.
    """

    with open(chemin, encoding="utf-8") as fichier:
        document: Dict[str, Any] = json.load(fichier)
    del document["tpi_seconds"], document["total_seconds"]
    del document["config"]["dossier_sortie"]
    return document


class ValidateurTest(unittest.TestCase):
    """
    Test case utilisé pour tester les validateurs des options.
    """

    def test_valeurs_valides(self) -> None:
        """
        Les saisies valides sont converties.
        """

        self.assertEqual(validateur_epsilon("0.7"), 0.7)
        self.assertEqual(validateur_epsilon("1"), 1.0)
        self.assertEqual(validateur_entier_positif("400"), 400)
        self.assertEqual(validateur_entier_positif_ou_nul("0"), 0)
        self.assertEqual(validateur_reel_positif("0"), 0.0)
        self.assertEqual(validateur_proportion("0.25"), 0.25)
        self.assertEqual(validateur_suffixe("all"), 0)
        self.assertEqual(validateur_suffixe("2"), 2)
        self.assertEqual(validateur_liste_entiers("64,32"), [64, 32])
        self.assertEqual(validateur_liste_entiers(""), [])

    def test_valeurs_invalides(self) -> None:
        """
        Les saisies invalides lèvent ``ArgumentTypeError``.
        """

        cas = [(validateur_epsilon, "0"), (validateur_epsilon, "1.2"), (validateur_epsilon, "abc"),
               (validateur_entier_positif, "0"), (validateur_entier_positif, "1.5"),
               (validateur_entier_positif_ou_nul, "-1"), (validateur_reel_positif, "-0.1"),
               (validateur_reel_positif, "nan"), (validateur_proportion, "0"), (validateur_proportion, "1.01"),
               (validateur_suffixe, "0"), (validateur_liste_entiers, "64,a")]
        for validateur, saisie in cas:
            with self.assertRaises(argparse.ArgumentTypeError, msg=saisie):
                validateur(saisie)


class CommandesTest(unittest.TestCase):
    """
    Test case utilisé pour tester les commandes ``gen-data``, ``train``, ``run``, ``sweep`` et ``score-analysis``.
    """

    dossier: ClassVar[tempfile.TemporaryDirectory]
    chemins: ClassVar[Dict[str, str]]
    sortie_entrainement: ClassVar[str]

    @classmethod
    def setUpClass(cls) -> None:
        """
        Génère 6 classes avec deux jeux corrompus, puis entraîne un modèle de base.
        """

        cls.dossier = tempfile.TemporaryDirectory()
        donnees = os.path.join(cls.dossier.name, "donnees")
        modeles = os.path.join(cls.dossier.name, "modeles")
        cls.chemins = {"donnees": donnees, "train": os.path.join(donnees, "train.csv"),
                       "test": os.path.join(donnees, "test.csv"), "modele": os.path.join(modeles, "modele.bin")}
        with contextlib.redirect_stdout(io.StringIO()):
            main(["gen-data", "--superclasses", "2", "--subclasses", "3", "--dim", "6", "--train-per-class", "20",
                  "--test-per-class", "8", "--severities", "1,3", "--seed", "1", "--out-dir", donnees])
        _, cls.sortie_entrainement = lancer("train", "--train", cls.chemins["train"], "--test", cls.chemins["test"],
                                            "--hidden", "16", "--epochs", "3", "--batch-size", "16", "--seed", "1",
                                            "--out-dir", modeles)

    @classmethod
    def tearDownClass(cls) -> None:
        cls.dossier.cleanup()

    def sortie(self, nom: str) -> str:
        """
        :return: chemin d'un nouveau dossier de sortie.
        """

        return os.path.join(self.dossier.name, nom)

    def options_execution(self, nom: str) -> List[str]:
        return ["--model", self.chemins["modele"], "--train", self.chemins["train"], "--test", self.chemins["test"],
                "--epochs", "1", "--batch-size", "16", "--clusters", "3", "--topk", "3", "--seed", "2",
                "--out-dir", self.sortie(nom)]

    def test_generer_et_entrainer(self) -> None:
        """
        ``gen-data`` écrit les jeux et les jeux corrompus, ``train`` écrit le modèle et affiche ses précisions.
        """

        for chemin in ("train.csv", "test.csv", "corrompus/test_severite_1.csv", "corrompus/test_severite_3.csv"):
            self.assertTrue(os.path.isfile(os.path.join(self.chemins["donnees"], chemin)), chemin)
        self.assertTrue(os.path.isfile(self.chemins["modele"]))
        self.assertIn("Modèle écrit dans", self.sortie_entrainement)
        self.assertIn("top-5", self.sortie_entrainement)

    def test_generer_binaire(self) -> None:
        """
        ``--format bin`` écrit les jumeaux binaires.
        """

        code, sortie = lancer("gen-data", "--superclasses", "2", "--subclasses", "2", "--dim", "3", "--train-per-class",
                              "2", "--test-per-class", "2", "--format", "bin", "--out-dir", self.sortie("binaire"))
        self.assertEqual(code, 0)
        self.assertIn("4 classes", sortie)
        self.assertTrue(os.path.isfile(os.path.join(self.sortie("binaire"), "train.bin")))

    def test_entrainer_jusqu_a_cible(self) -> None:
        """
        ``--target-top1`` retient un palier d'époques borné par ``--epochs`` et demande un jeu ``--test``.
        """

        options = ["--train", self.chemins["train"], "--hidden", "16", "--epochs", "3", "--batch-size", "16",
                   "--seed", "1", "--target-top1", "0.05", "--out-dir", self.sortie("cible")]
        code, sortie = lancer("train", "--test", self.chemins["test"], *options)
        self.assertEqual(code, 0)
        self.assertRegex(sortie, r"Palier retenu : [123] époques")
        code, sortie = lancer("train", *options)
        self.assertEqual(code, 1)
        self.assertIn("--target-top1", sortie)

    def test_executer(self) -> None:
        """
        ``run`` écrit un rapport dont les comptes totalisent le jeu de test, et confirme l'équivalence des modes.
        """

        code, sortie = lancer("run", *self.options_execution("executer"), "--check-equivalence")
        self.assertEqual(code, 0)
        self.assertIn("#F2T", sortie)
        self.assertIn(": True", sortie)
        with open(os.path.join(self.sortie("executer"), "report.json"), encoding="utf-8") as fichier:
            document = json.load(fichier)
        self.assertEqual(sum(document["counts"].values()), 48)
        self.assertEqual(document["total"], 48)
        self.assertEqual(document["config"]["groupes"], 3)
        self.assertEqual(len(lire_csv(os.path.join(self.sortie("executer"), "report.csv"))), 49)

    def test_fichier_de_configuration(self) -> None:
        """
        Les options l'emportent sur le fichier ``--config``, qui l'emporte sur les valeurs par défaut.
        """

        code, _ = lancer("run", "--config", fichier_configuration, "--epsilon", "0.8",
                         *self.options_execution("configuration"))
        self.assertEqual(code, 0)
        configuration = rapport_deterministe(os.path.join(self.sortie("configuration"), "report.json"))["config"]
        self.assertEqual(configuration["epsilon"], 0.8)
        self.assertEqual(configuration["groupes"], 3)
        self.assertTrue(configuration["restreindre_top_k"])
        self.assertEqual(configuration["tau"], 0.07)

    def test_suffixe_tout_prioritaire(self) -> None:
        """
        ``--trainable-suffix all`` l'emporte sur un suffixe entier lu dans le fichier ``--config``.
        """

        chemin = os.path.join(self.dossier.name, "suffixe.txt")
        with open(chemin, "w", encoding="utf-8") as fichier:
            fichier.write("suffixe = 1\n")
        lancer("run", "--config", chemin, *self.options_execution("suffixe_fichier"))
        lancer("run", "--config", chemin, "--trainable-suffix", "all", *self.options_execution("suffixe_tout"))
        for nom, attendu in (("suffixe_fichier", 1), ("suffixe_tout", None)):
            configuration = rapport_deterministe(os.path.join(self.sortie(nom), "report.json"))["config"]
            self.assertEqual(configuration["suffixe"], attendu, nom)

    def test_taches_sans_influence(self) -> None:
        """
        ``--jobs 1`` et ``--jobs 4`` écrivent le même rapport, temps exclus.
        """

        lancer("run", *self.options_execution("taches_1"), "--jobs", "1")
        lancer("run", *self.options_execution("taches_4"), "--jobs", "4")
        self.assertEqual(rapport_deterministe(os.path.join(self.sortie("taches_1"), "report.json")),
                         rapport_deterministe(os.path.join(self.sortie("taches_4"), "report.json")))

    def test_option_manquante(self) -> None:
        """
        Sans ``--model``, ``run`` affiche l'erreur et renvoie 1.
        """

        code, sortie = lancer("run", "--train", self.chemins["train"], "--test", self.chemins["test"])
        self.assertEqual(code, 1)
        self.assertIn("--model", sortie)

    def test_option_invalide(self) -> None:
        """
        Une option hors de son domaine arrête l'analyse des arguments.
        """

        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                main(["run", "--epsilon", "2"])

    def test_balayer_epsilon(self) -> None:
        """
        Le balayage écrit une ligne par valeur et un rapport par valeur.
        """

        code, _ = lancer("sweep", *self.options_execution("balayage"), "--axis", "epsilon", "--values", "0.3,0.9")
        self.assertEqual(code, 0)
        lignes = lire_csv(os.path.join(self.sortie("balayage"), "sweep_epsilon.csv"))
        self.assertEqual(lignes[0], ["value", "acc", "f2t", "t2f", "tpi"])
        self.assertEqual([ligne[0] for ligne in lignes[1:]], ["0.3", "0.9"])
        for valeur in ("0.3", "0.9"):
            self.assertTrue(os.path.isfile(os.path.join(self.sortie("balayage"),
                                                        "report_epsilon_{0}.json".format(valeur))))

    def test_balayer_scores(self) -> None:
        """
        Le balayage des scores écrit aussi les courbes F1T5.
        """

        code, _ = lancer("sweep", *self.options_execution("scores"), "--axis", "score", "--values",
                         "softmax_max,entropy,energy")
        self.assertEqual(code, 0)
        courbes = lire_csv(os.path.join(self.sortie("scores"), "f1t5.csv"))
        self.assertEqual(len(courbes), 1 + 3 * 48)

    def test_balayer_severites(self) -> None:
        """
        Le balayage des sévérités exécute la boucle sur chaque jeu corrompu du dossier, ou sur ceux demandés. Le seuil
        vaut 0.6 par défaut sur ces jeux, sauf option contraire.
        """

        dossier_corrompus = os.path.join(self.chemins["donnees"], "corrompus")
        code, _ = lancer("sweep", *self.options_execution("severites"), "--axis", "severity", "--corrupted-dir",
                         dossier_corrompus)
        self.assertEqual(code, 0)
        lignes = lire_csv(os.path.join(self.sortie("severites"), "sweep_severity.csv"))
        self.assertEqual([ligne[0] for ligne in lignes[1:]], ["test_severite_1", "test_severite_3"])
        rapport = rapport_deterministe(os.path.join(self.sortie("severites"), "report_severity_test_severite_1.json"))
        self.assertEqual(rapport["config"]["epsilon"], 0.6)
        code, _ = lancer("sweep", *self.options_execution("severite_3"), "--axis", "severity", "--corrupted-dir",
                         dossier_corrompus, "--values", "3", "--epsilon", "0.8")
        lignes = lire_csv(os.path.join(self.sortie("severite_3"), "sweep_severity.csv"))
        self.assertEqual([ligne[0] for ligne in lignes[1:]], ["test_severite_3"])
        rapport = rapport_deterministe(os.path.join(self.sortie("severite_3"), "report_severity_test_severite_3.json"))
        self.assertEqual(rapport["config"]["epsilon"], 0.8)

    def test_balayage_vide(self) -> None:
        """
        Une liste de valeurs vide affiche l'erreur et renvoie 1.
        """

        code, sortie = lancer("sweep", *self.options_execution("vide"), "--axis", "topk", "--values", ",")
        self.assertEqual(code, 1)
        self.assertIn("vide", sortie)

    def test_analyser_scores(self) -> None:
        """
        ``score-analysis`` écrit une courbe par score.
        """

        code, sortie = lancer("score-analysis", "--model", self.chemins["modele"], "--test", self.chemins["test"],
                              "--out-dir", self.sortie("analyse"))
        self.assertEqual(code, 0)
        self.assertIn("entropy", sortie)
        lignes = lire_csv(os.path.join(self.sortie("analyse"), "f1t5.csv"))
        self.assertEqual({ligne[2] for ligne in lignes[1:]}, {"softmax_max", "entropy", "energy"})

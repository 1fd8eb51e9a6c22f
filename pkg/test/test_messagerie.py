# -*-coding:Utf-8 -*

"""
Ce module contient la classe ``MessagerieTest``.
"""

from typing import Any, List
from lib.messagerie import Messagerie
import threading
import unittest


class MessagerieTest(unittest.TestCase):
    """
    Test case utilisé pour tester les fonctions de la classe ``Messagerie``.
    """

    def setUp(self) -> None:
        """
        Avant chaque test, crée une messagerie.
        """

        self.messagerie = Messagerie()

    def test_ajouter_obtenir(self) -> None:
        """
        Génère une liste d'objets à ajouter à la messagerie.
        Lance un Thread pour *ajouter* les objets, et un Thread pour les *obtenir*.
        Compare la liste d'objets ajoutés à celle d'objets obtenus.
        """

        nombre_objets = 100
        liste_objets_references = [("Travailleur-1", "resultat", nombre) for nombre in range(nombre_objets)]
        liste_objets_obtenus: List[Any] = []

        def ajouter_message() -> None:
            for objet in liste_objets_references:
                self.messagerie.ajouter(objet)

        def obtenir_message() -> None:
            for _ in range(nombre_objets):
                liste_objets_obtenus.append(self.messagerie.obtenir())

        recepteur = threading.Thread(target=obtenir_message)
        emetteur = threading.Thread(target=ajouter_message)
        recepteur.start()
        emetteur.start()
        recepteur.join()
        emetteur.join()
        self.assertEqual(liste_objets_references, liste_objets_obtenus)

    def test_plusieurs_emetteurs(self) -> None:
        """
        Quatre Threads ajoutent chacun 50 messages. Tous les messages sont obtenus, dans l'ordre d'émission de chaque
        Thread.
        """

        def ajouter_message(emetteur: str) -> None:
            for numero in range(50):
                self.messagerie.ajouter((emetteur, "resultat", numero))

        emetteurs = [threading.Thread(target=ajouter_message, args=("Travailleur-{0}".format(numero),))
                     for numero in range(4)]
        for emetteur in emetteurs:
            emetteur.start()
        obtenus = [self.messagerie.obtenir() for _ in range(200)]
        for emetteur in emetteurs:
            emetteur.join()
        for numero in range(4):
            nom = "Travailleur-{0}".format(numero)
            self.assertEqual([message for auteur, _, message in obtenus if auteur == nom], list(range(50)))

    def test_messageries_independantes(self) -> None:
        """
        Deux messageries ne partagent pas leurs messages.
        """

        autre = Messagerie()
        self.messagerie.ajouter("a")
        autre.ajouter("b")
        self.assertEqual(self.messagerie.obtenir(), "a")
        self.assertEqual(autre.obtenir(), "b")
        self.assertEqual(self.messagerie.messages, [])

    def test_effacer(self) -> None:
        """
        ``effacer()`` vide la liste des messages.
        """

        for numero in range(3):
            self.messagerie.ajouter(numero)
        self.messagerie.effacer()
        self.assertEqual(self.messagerie.messages, [])

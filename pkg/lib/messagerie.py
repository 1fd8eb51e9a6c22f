# -*-coding:Utf-8 -*

"""
Ce module contient la classe ``Messagerie``.
"""

from typing import Any, List
import threading


class Messagerie:
    """
    Permet aux Threads de travail d'ajouter des messages et au *Main Thread* de les récupérer.
    Avertit le *Main Thread* de l'arrivée d'un message grâce à la condition ``nouveau_message``.
    Les messages sont des tuples ``(emetteur, categorie, message)`` stockés sur la liste ``messages``.

    Chaque exécution de la boucle possède sa propre messagerie.
    """

    def __init__(self) -> None:
        self.nouveau_message = threading.Condition()
        self.messages: List[Any] = []

    def ajouter(self, message: Any) -> None:
        """
        Utilise le verrou ``nouveau_message`` pour accéder à la liste des messages.
        Ajoute le message à la liste.
        Indique l'arrivée d'un message avec ``nouveau_message``.

        :param message: message à ajouter.
        """

        with self.nouveau_message:
            self.messages.append(message)
            self.nouveau_message.notify()

    def obtenir(self) -> Any:
        """
        Attend l'arrivée d'un message et retire le plus ancien de la liste.

        :return: premier message de la liste.
        """

        with self.nouveau_message:
            while not len(self.messages):
                self.nouveau_message.wait()
            return self.messages.pop(0)

    def effacer(self) -> None:
        """
        Vide la liste des messages.
        """

        with self.nouveau_message:
            self.messages.clear()
